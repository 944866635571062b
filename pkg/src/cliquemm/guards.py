"""Resource guards: refuse oversized tensors, matrices and brute-force scans."""

from __future__ import annotations

from dataclasses import dataclass

from .errors import LimitExceeded


@dataclass(frozen=True)
class Limits:
    max_entries: int | None = 1 << 27  # ~1 GiB of uint64 per dense matrix
    max_work: int | None = 1 << 34  # multiply-adds in a single product
    max_subsets: int | None = 10**8  # brute-force subset scan

    def entries(self, count: int, what: str) -> None:
        if self.max_entries is not None and count > self.max_entries:
            raise LimitExceeded(f"{what}: {count} entries exceeds limit {self.max_entries}")

    def work(self, count: int, what: str) -> None:
        if self.max_work is not None and count > self.max_work:
            raise LimitExceeded(f"{what}: {count} multiply-adds exceeds limit {self.max_work}")

    def subsets(self, count: int, what: str) -> None:
        if self.max_subsets is not None and count > self.max_subsets:
            raise LimitExceeded(f"{what}: {count} subsets exceeds limit {self.max_subsets}")

    def product(self, rows: int, inner: int, cols: int, what: str) -> None:
        """Guard an ``rows x inner`` by ``inner x cols`` product and its operands."""
        self.entries(rows * inner, f"{what} (left operand)")
        self.entries(inner * cols, f"{what} (right operand)")
        self.entries(rows * cols, what)
        self.work(rows * inner * cols, what)


DEFAULT_LIMITS = Limits()
UNLIMITED = Limits(None, None, None)
