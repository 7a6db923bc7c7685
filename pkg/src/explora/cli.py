"""Command line front door: a headless REPL and the HTTP service.

    explora repl --config <file>    read utterances from stdin, print replies
    explora serve --config <file>   run the HTTP/JSON service

Exit codes: 0 success, 2 config error, 3 bind failure. When --config is
omitted the EXPLORA_CONFIG environment variable is consulted.
"""
from __future__ import annotations

import argparse
import os
import socket
import sys

from explora.config import ConfigError, build_manager, load_config
from explora.dialogue import DialogueManager
from explora.session import (
    Ended,
    Results,
    ScreenView,
    Sections,
    SectionSummary,
    Welcome,
    metrics_of,
    new_session,
)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_BIND = 3


def render_screen(screen: ScreenView) -> str:
    """ASCII rendering of a screen view, numbered like the spoken menus."""
    if isinstance(screen, Welcome):
        return f"== Welcome ==\n  {screen.text}"
    if isinstance(screen, Results):
        lines = [f"== Results ({len(screen.titles)}) =="]
        lines += [f"  {i + 1}. {t}" for i, t in enumerate(screen.titles)]
        return "\n".join(lines)
    if isinstance(screen, Sections):
        lines = [f"== Sections: {screen.title} =="]
        counter = [0]

        def walk(nodes, depth):
            for node in nodes:
                counter[0] += 1
                lines.append(f"  {'   ' * depth}{counter[0]}. {node.heading}")
                walk(node.children, depth + 1)

        walk(screen.headings, 0)
        return "\n".join(lines)
    if isinstance(screen, SectionSummary):
        lines = [f"== {screen.heading} =="]
        lines += [f"  {s}" for s in screen.summary_sentences]
        if screen.image is not None:
            lines.append(f"  [image] {screen.image.label} <{screen.image.url}>")
        if screen.child_headings:
            lines.append("  Subsections:")
            lines += [
                f"    {i + 1}. {h}" for i, h in enumerate(screen.child_headings)
            ]
        return "\n".join(lines)
    raise TypeError(f"not a screen view: {screen!r}")


def run_repl(manager: DialogueManager, stdin=None, stdout=None) -> int:
    """One utterance per input line; speech then screen per reply."""
    stdin = stdin or sys.stdin
    stdout = stdout or sys.stdout

    def emit(text: str) -> None:
        print(text, file=stdout)

    session = new_session()
    reply = manager.start(session)
    emit(reply.speech)
    emit(render_screen(reply.screen))
    for line in stdin:
        utterance = line.strip()
        if not utterance:
            continue
        reply = manager.handle(session, utterance)
        emit(reply.speech)
        emit(render_screen(reply.screen))
        if isinstance(session.state, Ended):
            break
    metrics = metrics_of(session)
    emit(
        f"interactions: {metrics.total_interactions} "
        f"(successful: {metrics.successful}, failed: {metrics.unsuccessful})"
    )
    return EXIT_OK


def run_serve(cfg, app=None) -> int:
    import uvicorn

    from explora.service import create_app

    # Probe the port first so a bind failure maps to a clean exit code.
    try:
        probe = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
        probe.setsockopt(socket.SOL_SOCKET, socket.SO_REUSEADDR, 1)
        probe.bind((cfg.host, cfg.port))
        probe.close()
    except OSError as exc:
        print(f"error: cannot bind {cfg.host}:{cfg.port}: {exc}", file=sys.stderr)
        return EXIT_BIND
    app = app or create_app(cfg)
    try:
        uvicorn.run(app, host=cfg.host, port=cfg.port, log_level="info")
    except (OSError, SystemExit) as exc:
        print(f"error: server stopped: {exc}", file=sys.stderr)
        return EXIT_BIND
    return EXIT_OK


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="explora",
        description="Conversational exploratory search over web and Wikipedia.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in (
        ("repl", "interactive text session on stdin/stdout"),
        ("serve", "run the HTTP/JSON session service"),
    ):
        cmd = sub.add_parser(name, help=help_text)
        cmd.add_argument(
            "--config",
            default=None,
            help="config file path (falls back to $EXPLORA_CONFIG)",
        )
    return parser


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    config_path = args.config or os.environ.get("EXPLORA_CONFIG")
    if not config_path:
        print("error: no config given (use --config or EXPLORA_CONFIG)", file=sys.stderr)
        return EXIT_CONFIG
    try:
        cfg = load_config(config_path)
        if args.command == "repl":
            manager = build_manager(cfg)
            return run_repl(manager)
        return run_serve(cfg)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
