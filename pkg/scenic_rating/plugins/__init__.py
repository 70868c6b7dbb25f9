#!/usr/bin/env python
"""
Command plugins for scenic-rating.

Every *_plugin.py module in this package defines one ScenicPlugin subclass; the
PluginRegistry discovers them by file name.
"""

from scenic_rating.core.plugin_base import ScenicPlugin
from scenic_rating.core.plugin_registry import PluginRegistry

__all__ = ["ScenicPlugin", "PluginRegistry"]
