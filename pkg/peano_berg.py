#!/usr/bin/env python3
import os
import sys
import logging
from typing import List, Optional

from actions import COMMANDS
from config import Config
from cli import create_parser
from errors import PeanoBergError

DEFAULT_CONFIG = os.path.join(os.path.dirname(os.path.abspath(__file__)), 'config.yaml')

_handlers: List[logging.Handler] = []


def setup_logging(config: Config, verbose: bool = False):
    """Logging setup: everything to the log file, warnings (or debug with --verbose) to the console"""
    log_dir = os.path.dirname(config.log_file_path)
    if log_dir and not os.path.exists(log_dir):
        os.makedirs(log_dir)

    # Configure root logger
    root_logger = logging.getLogger()
    root_logger.setLevel(logging.DEBUG)
    for handler in _handlers:
        root_logger.removeHandler(handler)
        handler.close()
    _handlers.clear()

    # Create formatters
    file_formatter = logging.Formatter('%(asctime)s - %(name)s - %(levelname)s - %(message)s')
    console_formatter = logging.Formatter('%(levelname)s: %(message)s')

    # Create handlers
    file_handler = logging.FileHandler(config.log_file_path)
    file_handler.setFormatter(file_formatter)

    console_handler = logging.StreamHandler()
    console_handler.setFormatter(console_formatter)
    console_handler.setLevel(logging.DEBUG if verbose else logging.WARNING)

    # Add handlers to root logger
    for handler in (file_handler, console_handler):
        root_logger.addHandler(handler)
        _handlers.append(handler)

    logging.info("Logging setup completed")


def main(argv: Optional[List[str]] = None) -> int:
    """Entry point; returns the process exit code"""
    parser = create_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else 2

    try:
        config = Config(args.config or DEFAULT_CONFIG)
    except FileNotFoundError:
        print(f"error: configuration file not found: {args.config or DEFAULT_CONFIG}", file=sys.stderr)
        return 2
    except PeanoBergError as e:
        print(f"error: {e}", file=sys.stderr)
        return e.exit_code
    setup_logging(config, args.verbose)

    try:
        return COMMANDS[args.command](config, args)
    except PeanoBergError as e:
        logging.debug(f"{type(e).__name__} in stage {e.stage}", exc_info=True)
        print(f"error: {e}", file=sys.stderr)
        return e.exit_code


if __name__ == '__main__':
    sys.exit(main())
