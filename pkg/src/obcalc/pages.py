"""Page surfaces of open books."""

from __future__ import annotations

from dataclasses import dataclass

__all__ = ["PageDescriptor", "ANNULUS", "MOBIUS", "KLEIN"]


@dataclass(frozen=True)
class PageDescriptor:
    """A compact surface with boundary.

    ``genus`` counts crosscaps for nonorientable pages and handles for
    orientable ones.  ``crosscap_word`` optionally fixes the basis of the
    free fundamental group in which the surface relation reads
    ``crosscap_word * c_1 * ... * c_r = 1``; the default is ``a_1^2 ... a_k^2``.
    """

    genus: int
    boundary: int
    orientable: bool = False
    crosscap_word: str | None = None

    def __post_init__(self):
        if self.boundary < 1:
            raise ValueError("a page needs at least one boundary component")
        if self.genus < 0:
            raise ValueError("negative genus")
        if not self.orientable and self.genus == 0:
            raise ValueError("a nonorientable page has genus >= 1")

    @property
    def euler_characteristic(self) -> int:
        if self.orientable:
            return 2 - 2 * self.genus - self.boundary
        return 2 - self.genus - self.boundary

    def same_surface(self, other: PageDescriptor) -> bool:
        return (self.genus, self.boundary, self.orientable) == (other.genus, other.boundary, other.orientable)

    def __str__(self) -> str:
        if self.orientable:
            return f"Sigma_{self.genus},{self.boundary}"
        return f"N_{self.genus},{self.boundary}"


ANNULUS = PageDescriptor(0, 2, orientable=True)
MOBIUS = PageDescriptor(1, 1)
KLEIN = PageDescriptor(2, 1)
