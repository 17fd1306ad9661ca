"""Pose logs, transform trees and replay clocks."""
