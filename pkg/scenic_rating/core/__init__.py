#!/usr/bin/env python
"""
Core infrastructure for scenic-rating.

This module provides the base classes and registry for the plugin system.
"""

from scenic_rating.core.plugin_base import ScenicPlugin
from scenic_rating.core.plugin_registry import PluginRegistry

__all__ = ["PluginRegistry", "ScenicPlugin"]
