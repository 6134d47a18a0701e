"""Interactive terminal chat over the pipeline.

Commands: ``/rate N`` records a rating, ``/trace`` prints the last trace,
``/quit`` exits (prompting for a rating first if none was given). EOF exits
cleanly.
"""

from __future__ import annotations

import json
import sys
from typing import IO

from .pipeline import Pipeline
from .session import Trace


def run_repl(pipeline: Pipeline, in_stream: IO[str] | None = None, out_stream: IO[str] | None = None) -> int:
    stdin = in_stream or sys.stdin
    stdout = out_stream or sys.stdout

    def say(text: str) -> None:
        print(text, file=stdout)

    session = pipeline.create_session()
    say(f"session {session.id} started. /rate N, /trace, /quit to exit.")
    last_trace: Trace | None = None
    while True:
        print("you> ", end="", file=stdout, flush=True)
        line = stdin.readline()
        if not line:  # EOF
            say("")
            return 0
        line = line.strip()
        if not line:
            continue
        if line == "/quit":
            if session.rating is None:
                print("rate this conversation 1-5 (enter to skip)> ", end="", file=stdout, flush=True)
                answer = stdin.readline().strip()
                if answer.isdigit() and 1 <= int(answer) <= 5:
                    pipeline.rate(session.id, int(answer))
                    say(f"thanks! recorded rating {answer}.")
            say("bye.")
            return 0
        if line.startswith("/rate"):
            parts = line.split()
            if len(parts) == 2 and parts[1].isdigit() and 1 <= int(parts[1]) <= 5:
                pipeline.rate(session.id, int(parts[1]))
                say(f"recorded rating {parts[1]}.")
            else:
                say("usage: /rate N   (N in 1..5)")
            continue
        if line == "/trace":
            if last_trace is None:
                say("no trace yet.")
            else:
                say(json.dumps(last_trace.to_record(session.id), indent=2))
            continue
        reply, last_trace = pipeline.respond(session.id, line)
        say(f"bot> {reply}")
