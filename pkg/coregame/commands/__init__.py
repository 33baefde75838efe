"""
命令模块
"""
import argparse
import functools
import logging
from typing import Callable, Dict

from coregame.config import EXIT_OK
from coregame.services.instance_io import render_text, to_json, write_output
from coregame.utils.errors import CoreGameError

logger = logging.getLogger(__name__)


def emit(args: argparse.Namespace, payload: Dict, summary: str = '') -> int:
    """
    输出成功结果

    --json 时输出 {"success": true, ...}；否则输出摘要行与可读报告
    """
    output = getattr(args, 'output', None)
    if getattr(args, 'json', False):
        write_output(to_json({'success': True, **payload}), output)
    else:
        text = render_text(payload)
        write_output(f"{summary}\n{text}" if summary else text, output)
    return EXIT_OK


def command(handler: Callable[[argparse.Namespace], int]) -> Callable[[argparse.Namespace], int]:
    """命令处理器的统一错误出口：CoreGameError 映射为退出码"""
    @functools.wraps(handler)
    def wrapper(args: argparse.Namespace) -> int:
        try:
            return handler(args)
        except CoreGameError as e:
            logger.error(f"{args.command} 失败: {e}")
            if getattr(args, 'json', False):
                body = {'success': False, 'error': str(e), 'type': type(e).__name__}
                violations = getattr(e, 'violations', None)
                if violations:
                    body['violations'] = violations
                print(to_json(body))
            else:
                print(f"错误 ({type(e).__name__}): {e}")
            return e.exit_code
    return wrapper


def add_common_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument('--json', action='store_true', help='以 JSON 输出')
    parser.add_argument('-o', '--output', help='写入文件而不是标准输出')


from coregame.commands.analysis import register_analysis_commands  # noqa: E402
from coregame.commands.generate import register_generate_commands  # noqa: E402


def register_all_commands(subparsers) -> None:
    """
    注册所有子命令

    Args:
        subparsers: argparse 子命令集合
    """
    register_analysis_commands(subparsers)
    register_generate_commands(subparsers)
