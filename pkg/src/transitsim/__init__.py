"""Agent-based dynamic assignment simulator for timetable-based transit."""

__version__ = "0.1.0"
