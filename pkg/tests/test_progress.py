import pytest

from core.progress import ProgressReporter, progress_bar


def test_progress_bar_blocks():
    assert progress_bar(None) == "[░░░░░░░░░░]"
    assert progress_bar(0) == "[░░░░░░░░░░]"
    assert progress_bar(64.4) == "[██████░░░░]"
    assert progress_bar(150) == "[██████████]"
    assert progress_bar(50, length=4) == "[██░░]"


def test_reporter_throttles_to_step():
    seen = []
    reporter = ProgressReporter(200, step=5, callback=seen.append)

    for completed in range(1, 201):
        reporter.update(completed)
    reporter.finish()

    assert seen == reporter.emitted
    assert seen[0] == 0
    assert seen[-1] == 100
    assert seen == sorted(seen)
    assert all(b - a >= 5 for a, b in zip(seen[:-1], seen[1:-1]))
    assert seen.count(100) == 1


def test_reporter_zero_total_still_finishes():
    reporter = ProgressReporter(0)

    reporter.update(0)
    reporter.finish()

    assert reporter.emitted == [100]


def test_finish_is_idempotent():
    reporter = ProgressReporter(3)
    for completed in range(1, 4):
        reporter.update(completed)

    reporter.finish()
    reporter.finish()

    assert reporter.emitted == [33, 66, 100]


@pytest.mark.parametrize("total", [1, 7, 11, 1000])
def test_reporter_never_goes_backwards(total):
    reporter = ProgressReporter(total, step=1)
    for completed in range(1, total + 1):
        reporter.update(completed)
    reporter.finish()

    assert reporter.emitted == sorted(reporter.emitted)
    assert reporter.emitted[-1] == 100


def test_failing_callback_does_not_stop_reporting():
    def explode(percent):
        raise RuntimeError("callback down")

    reporter = ProgressReporter(2, callback=explode)
    reporter.update(1)
    reporter.finish()

    assert reporter.emitted == [50, 100]
