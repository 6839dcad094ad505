"""Per-iteration convergence logging shared by all solvers."""

from __future__ import annotations

import io
from dataclasses import dataclass, field


@dataclass
class Trace:
    """Iteration log: one record per logged iterate, initial point included.

    ``gap`` entries are ``None`` for problems without a dual; ``restarted``
    is ``None`` for solvers without a restart rule.
    """

    iters: list[int] = field(default_factory=list)
    objective: list[float] = field(default_factory=list)
    gap: list[float | None] = field(default_factory=list)
    grad_norm: list[float | None] = field(default_factory=list)
    restarted: list[bool | None] = field(default_factory=list)
    elapsed_ms: list[float] = field(default_factory=list)

    def append(self, k, objective, gap=None, grad_norm=None, restarted=None,
               elapsed_ms=0.0):
        self.iters.append(int(k))
        self.objective.append(float(objective))
        self.gap.append(None if gap is None else float(gap))
        self.grad_norm.append(None if grad_norm is None else float(grad_norm))
        self.restarted.append(restarted)
        self.elapsed_ms.append(float(elapsed_ms))

    def __len__(self) -> int:
        return len(self.iters)

    @property
    def restart_count(self) -> int:
        return sum(1 for r in self.restarted if r)

    def to_csv(self, path_or_file, timing: bool = False) -> None:
        """Write the log as CSV.

        The wall-time column is left empty unless ``timing`` is set, so that
        repeated runs with the same configuration are byte-identical.
        """
        own = isinstance(path_or_file, (str, bytes)) or hasattr(path_or_file, "__fspath__")
        fh = open(path_or_file, "w", newline="") if own else path_or_file
        try:
            fh.write("iter,objective,gap,grad_norm,restarted,elapsed_ms\n")
            for i in range(len(self.iters)):
                gap = "" if self.gap[i] is None else repr(self.gap[i])
                gn = "" if self.grad_norm[i] is None else repr(self.grad_norm[i])
                rs = "" if self.restarted[i] is None else int(self.restarted[i])
                ms = repr(self.elapsed_ms[i]) if timing else ""
                fh.write(f"{self.iters[i]},{self.objective[i]!r},{gap},{gn},{rs},{ms}\n")
        finally:
            if own:
                fh.close()

    def to_csv_string(self, timing: bool = False) -> str:
        buf = io.StringIO()
        self.to_csv(buf, timing=timing)
        return buf.getvalue()
