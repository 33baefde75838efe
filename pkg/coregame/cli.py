#!/usr/bin/env python3
"""
coregame 命令行入口
判定非线性优化博弈的核是否非空，提取与校验核成员，生成应用族实例

模块结构：
- config.py: 配置常量
- commands/: 子命令
- services/: 业务逻辑
- utils/: 通用工具
"""

import argparse
import logging
import sys
from typing import List, Optional

from coregame.commands import register_all_commands
from coregame.config import EXIT_USAGE, LOG_FORMAT, LOG_LEVEL, VERSION

logger = logging.getLogger(__name__)


def configure_logging(verbose: bool = False) -> None:
    """配置根日志，日志输出到 stderr"""
    level = logging.INFO if verbose else getattr(logging, LOG_LEVEL, logging.WARNING)
    logging.basicConfig(level=level, format=LOG_FORMAT, stream=sys.stderr)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog='coregame',
        description='非线性优化博弈的核判定工具（精确有理数运算）',
    )
    parser.add_argument('--version', action='version', version=f'coregame {VERSION}')
    parser.add_argument('-v', '--verbose', action='store_true', help='输出 INFO 级别日志')
    subparsers = parser.add_subparsers(dest='command', metavar='COMMAND')
    register_all_commands(subparsers)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    """命令行主入口，返回退出码"""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code else 0
    configure_logging(args.verbose)
    if not getattr(args, 'handler', None):
        parser.print_help()
        return EXIT_USAGE
    logger.info(f"执行命令 {args.command}")
    return args.handler(args)


if __name__ == '__main__':
    sys.exit(main())
