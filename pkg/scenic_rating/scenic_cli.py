#!/usr/bin/env python
"""
Plugin-based CLI for scenic-rating.

Every subcommand lives in scenic_rating/plugins as a *_plugin.py module. This module builds
the parser from the discovered plugins, renders the categorized help screen and maps
failures to exit codes: 1 for usage and configuration errors, 2 for data errors, 3 for
anything else and 130 on interrupt.
"""

import sys
from argparse import Action, ArgumentParser, Namespace
from typing import List, Optional

import argcomplete

from scenic_rating.core.env_fetcher import EnvFetcher
from scenic_rating.core.logger import get_logger
from scenic_rating.core.plugin_registry import PluginRegistry
from scenic_rating.exceptions.exceptions import ScenicError, UsageError

logger = get_logger("cli")

EXIT_USAGE = UsageError.exit_code
EXIT_INTERNAL = ScenicError.exit_code
EXIT_INTERRUPTED = 130

# ANSI color codes
COLORS = {
    "BOLD": "\033[1m",
    "CYAN": "\033[96m",
    "GREEN": "\033[92m",
    "YELLOW": "\033[93m",
    "RESET": "\033[0m",
    "DIM": "\033[2m",
}

ASCII_BANNER = r"""
  ___  ___ ___ _  _ ___ ___   ___    _ _____ ___ _  _  ___
 / __|/ __| __| \| |_ _/ __| | _ \  /_\_   _|_ _| \| |/ __|
 \__ \ (__| _|| .` || | (__  |   / / _ \| |  | || .` | (_ |
 |___/\___|___|_|\_|___\___| |_|_\/_/ \_\_| |___|_|\_|\___|

          Location aesthetics from photo metadata 📷
"""

# Category display order (categories not in this list will appear last)
CATEGORY_ORDER = [
    "Data Preparation",
    "Modeling",
    "Evaluation",
    "Other",
]

CATEGORY_EMOJIS = {
    "Data Preparation": "🗺️ ",
    "Modeling": "🌳",
    "Evaluation": "📊",
    "Other": "📦",
}


class ScenicArgumentParser(ArgumentParser):
    """ArgumentParser whose usage errors exit with the usage exit code."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


class FancyHelpAction(Action):
    """Custom help action that displays fancy formatted help."""

    def __init__(self, option_strings, dest, default=False, help=None):  # pylint: disable=redefined-builtin
        super().__init__(option_strings, dest, 0, default=default, help=help)

    def __call__(self, parser, namespace, values, option_string=None):
        _print_fancy_help(parser)
        parser.exit()


def _print_command_examples(plugin, prog_name):
    dim, reset, cyan = COLORS["DIM"], COLORS["RESET"], COLORS["CYAN"]
    for example in plugin.example_commands:
        print(f"      {dim}${reset} {cyan}{prog_name}{reset} {example}")


def _print_commands(registry, prog_name):
    """Print command categories and examples."""
    categories = {}
    for cmd in registry.list_plugins():
        categories.setdefault(registry.get_plugin(cmd).category, []).append(cmd)

    def category_sort_key(cat):
        return CATEGORY_ORDER.index(cat) if cat in CATEGORY_ORDER else len(CATEGORY_ORDER)

    for category in sorted(categories, key=category_sort_key):
        emoji = CATEGORY_EMOJIS.get(category, "")
        display_category = f"{emoji} {category}" if emoji else category
        print(f"  {COLORS['BOLD']}{display_category}{COLORS['RESET']}")
        for idx, cmd in enumerate(sorted(categories[category])):
            if idx > 0:
                print()
            plugin = registry.get_plugin(cmd)
            help_text = plugin.help_text
            if len(help_text) > 60:
                help_text = help_text[:57] + "..."
            print(f"    {COLORS['GREEN']}{cmd:20s}{COLORS['RESET']} {COLORS['DIM']}{help_text}{COLORS['RESET']}")
            _print_command_examples(plugin, prog_name)
        print()


def _print_fancy_help(parser):
    """Print fancy formatted help output."""
    print(f"{COLORS['CYAN']}{ASCII_BANNER}{COLORS['RESET']}")

    print(f"\n{COLORS['BOLD']}{COLORS['GREEN']}DESCRIPTION{COLORS['RESET']}")
    print(f"  {COLORS['DIM']}Predict the aesthetic rating class of places from the social metadata")
    print(f"  of geo-tagged photos taken around them.{COLORS['RESET']}\n")

    registry = PluginRegistry()
    registry.discover_plugins()

    prog_name = parser.prog
    print(f"{COLORS['BOLD']}{COLORS['YELLOW']}USAGE{COLORS['RESET']}")
    print(
        f"  {COLORS['CYAN']}{prog_name}{COLORS['RESET']} {COLORS['DIM']}<command>{COLORS['RESET']} "
        f"{COLORS['DIM']}[options]{COLORS['RESET']}\n"
    )

    print(f"{COLORS['BOLD']}{COLORS['YELLOW']}COMMANDS{COLORS['RESET']}\n")
    _print_commands(registry, prog_name)

    print(f"{COLORS['BOLD']}{COLORS['YELLOW']}OPTIONS{COLORS['RESET']}")
    print(
        f"  {COLORS['GREEN']}-h, --help{COLORS['RESET']}              "
        f"{COLORS['DIM']}Show this help message and exit{COLORS['RESET']}"
    )
    print(
        f"  {COLORS['GREEN']}<command> --help{COLORS['RESET']}        "
        f"{COLORS['DIM']}Show every flag of a command with its default{COLORS['RESET']}"
    )
    print()
    print(f"{COLORS['DIM']}{'─' * 79}{COLORS['RESET']}\n")


class ScenicCLI:
    """Main CLI class using plugin architecture."""

    def __init__(self, registry: Optional[PluginRegistry] = None):
        self.registry = registry or PluginRegistry()

    def build_parser(self) -> ScenicArgumentParser:
        """Create the top-level parser with one subparser per discovered plugin."""
        prog_name = EnvFetcher.get("CLI_NAME", default="scenic-rating") or "scenic-rating"
        parser = ScenicArgumentParser(description="Scenic rating pipeline", prog=prog_name, add_help=False)
        parser.add_argument("-h", "--help", action=FancyHelpAction, help="Show this help message and exit")

        subparsers = parser.add_subparsers(dest="command", required=False, help="Available commands")
        if not self.registry.list_plugins():
            self.registry.discover_plugins()
        self.registry.register_all(subparsers)
        return parser

    def run(self, argv: Optional[List[str]] = None) -> int:
        """
        Parse arguments and dispatch to a plugin.

        Arguments:
            argv: Arguments without the program name, default sys.argv[1:]

        Returns:
            int: Process exit code
        """
        parser = self.build_parser()
        argcomplete.autocomplete(parser)

        try:
            args = parser.parse_args(argv)
        except SystemExit as e:
            return int(e.code or 0)

        if not args.command:
            _print_fancy_help(parser)
            return 0

        return self._dispatch_command(args)

    def _dispatch_command(self, args: Namespace) -> int:
        """
        Dispatch command to appropriate plugin.

        Arguments:
            args: Parsed command line arguments

        Returns:
            int: Exit code of the command
        """
        plugin = self.registry.get_plugin(args.command)
        if plugin is None:
            print(f"❌ Unknown command: {args.command}", file=sys.stderr)
            return EXIT_USAGE

        try:
            plugin.set_dependency("plugin_registry", self.registry)
            success = plugin.execute(args)
            return 0 if success else EXIT_INTERNAL
        except KeyboardInterrupt:
            print("\n⚠️  Operation cancelled by user", file=sys.stderr)
            return EXIT_INTERRUPTED
        except ScenicError as e:
            logger.debug("Command %s failed", args.command, exc_info=True)
            print(f"❌ {args.command} failed: {e}", file=sys.stderr)
            return e.exit_code
        except Exception as e:  # pylint: disable=broad-exception-caught
            logger.debug("Command %s crashed", args.command, exc_info=True)
            print(f"❌ Command failed: {e}", file=sys.stderr)
            return EXIT_INTERNAL


def main():
    """Main entry point."""
    sys.exit(ScenicCLI().run())


if __name__ == "__main__":
    main()
