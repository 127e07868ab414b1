# dot_export.py

"""
Export the blow-up tower of a trace as a graphviz DOT digraph.

Nodes are the stages X0, X1, ...; each edge points from X_s down to X_{s-1} and is
labeled with the center and the (sigma, tau) value it resolved. Render with:

    dot -Tpng -O tower.gv
"""

from typing import List

from blowup_engine import replay_trace
from models import Trace


def _escape(text: str) -> str:
    return text.replace("\\", "\\\\").replace('"', '\\"')


def export_dot(trace: Trace) -> str:
    states = replay_trace(trace)
    lines: List[str] = []
    write_line = lines.append
    write_line('digraph tower {')
    write_line('\trankdir = BT;')
    write_line('\tnode [shape = box];')
    for state in states:
        label = f"X{state.step}\\n{state.arrangement.vertex_count} divisors"
        write_line(f'\t"X{state.step}" [label="{label}"];')
    for trace_step, source in zip(trace.steps, states):
        i, j = trace_step.center
        names = source.arrangement
        label = (
            f"{_escape(names.name_of(i))} ∩ {_escape(names.name_of(j))}\\n"
            f"{trace_step.sigma_before}, tau={trace_step.tau_before}"
        )
        write_line(f'\t"X{trace_step.step}" -> "X{trace_step.step - 1}" [label="{label}"];')
    write_line('}')
    return "\n".join(lines) + "\n"
