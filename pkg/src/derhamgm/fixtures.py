"""Shipped rings, towers, and surjections used by the demos, the CLI
fixtures, and the acceptance suite."""

from fractions import Fraction

from .laurent import LPoly
from .poly import Ring
from .towers import Tower


def line_ring():
    """Q[x]."""
    return Ring(["x"])


def torus_ring():
    """Q[x^{pm 1}] (the multiplicative group)."""
    return Ring(["x"], inverted=["x"])


def plane_ring():
    """Q[x, y]."""
    return Ring(["x", "y"])


def free_tower():
    """Q -> Q[x] -> Q[x, y]."""
    return Tower(Ring(["x"]), ["y"], [], name="free")


def square_root_tower():
    """Q -> Q[lam^{pm 1}] -> base[y]/(y^2 - lam)."""
    base = Ring(["lam"], inverted=["lam"], weights={"lam": 2})
    return Tower(base, ["y"], ["y^2 - lam"], fiber_weights={"y": 1},
                 name="square_root")


def _elliptic_canonical_h1(tower, rdr):
    """The classes dx/y and x dx/y as columns over the relative basis.

    dx/y = lam^{-1} y dx - (2x/(3 lam)) dy, using 1 = lam^{-1}(y*y - x*x^2)
    on the curve; x dx/y is x times that.  Both are certified cocycle
    classes by the caller.
    """
    basis = rdr.basis(1)
    pos = {lb: i for i, lb in enumerate(basis)}
    n = len(basis)
    lam_inv = LPoly.term(1, -1)
    two_thirds = LPoly.term(Fraction(-2, 3), -1)

    omega1 = [LPoly.zero()] * n
    omega1[pos[((0, 1), (0,))]] = lam_inv          # lam^{-1} y dx
    omega1[pos[((1, 0), (1,))]] = two_thirds       # -(2x/(3 lam)) dy

    omega2 = [LPoly.zero()] * n
    omega2[pos[((1, 1), (0,))]] = lam_inv          # lam^{-1} x y dx
    omega2[pos[((2, 0), (1,))]] = two_thirds       # -(2x^2/(3 lam)) dy
    return [("dx/y", omega1), ("x*dx/y", omega2)]


def elliptic_tower():
    """Q -> Q[lam^{pm 1}] -> base[x, y]/(y^2 - x^3 - lam).

    Weights (lam, x, y) = (6, 2, 3) make the Weierstrass relation
    homogeneous; the canonical H^1 basis hook exposes {dx/y, x dx/y}.
    """
    base = Ring(["lam"], inverted=["lam"], weights={"lam": 6})
    return Tower(
        base,
        ["x", "y"],
        ["y^2 - x^3 - lam"],
        fiber_weights={"x": 2, "y": 3},
        name="elliptic",
        canonical_h1=_elliptic_canonical_h1,
    )


def two_parameter_tower():
    """Q -> Q[s^{pm 1}, t^{pm 1}] -> base[y]/(y^2 - s t).

    A rank-2 base for the curvature (flatness) identity; H^0 is free on the
    fiber monomials 1, y.
    """
    base = Ring(["s", "t"], inverted=["s", "t"])
    return Tower(base, ["y"], ["y^2 - s*t"], fiber_weights={"y": 1},
                 name="two_parameter")


def shipped_towers():
    return [free_tower(), square_root_tower(), elliptic_tower()]


# -- quillen surjection fixtures -----------------------------------------------


def regular_surjection():
    """I = (x, y) inside Q[x, y]."""
    return {"ring": Ring(["x", "y"]), "ideal": ["x", "y"]}


def hypersurface_surjection():
    """I = (x^2) inside Q[x]."""
    return {"ring": Ring(["x"]), "ideal": ["x^2"]}


def non_regular_surjection():
    """I = (x^2, x*y) inside Q[x, y]."""
    return {"ring": Ring(["x", "y"]), "ideal": ["x^2", "x*y"]}


def two_powers_surjection():
    """I = (x^2, y^3) inside Q[x, y], a regular sequence of higher degrees."""
    return {"ring": Ring(["x", "y"]), "ideal": ["x^2", "y^3"]}
