"""Buchberger's algorithm over Q with cofactor tracking.

The basis returned by reduced_groebner is the unique reduced Groebner basis
for the ring's monomial order, sorted by lead monomial, so every downstream
computation (normal forms, standard monomial windows, golden files) is
deterministic.
"""

from fractions import Fraction

from .poly import Poly, mon_div, mon_divides, mon_lcm, mon_mul

FONE = Fraction(1)


def divide(p, divisors, track=False):
    """Multivariate division: p = sum q_i * divisors[i] + r.

    No lead monomial of a divisor divides any monomial of r.  Divisors are
    tried in list order, which fixes the quotients.
    """
    ring = p.ring
    key = ring.order_key
    quotients = [ring.const(0) for _ in divisors] if track else None
    remainder = {}
    work = dict(p.terms)
    leads = [d.lead() for d in divisors]
    while work:
        m = max(work, key=key)
        c = work.pop(m)
        for i, (lm, lc) in enumerate(leads):
            if mon_divides(lm, m):
                factor = Poly(ring, {mon_div(m, lm): c / lc})
                if track:
                    quotients[i] = quotients[i] + factor
                prod = factor * divisors[i]
                for mm, cc in prod.terms.items():
                    if mm == m:
                        continue
                    s = work.get(mm, Fraction(0)) - cc
                    if s:
                        work[mm] = s
                    else:
                        work.pop(mm, None)
                break
        else:
            remainder[m] = c
    r = Poly(ring)
    r.terms = remainder
    return quotients, r


def s_polynomial(f, g):
    ring = f.ring
    (mf, cf), (mg, cg) = f.lead(), g.lead()
    lcm = mon_lcm(mf, mg)
    tf = Poly(ring, {mon_div(lcm, mf): FONE / cf})
    tg = Poly(ring, {mon_div(lcm, mg): FONE / cg})
    return tf * f - tg * g, tf, tg


def buchberger(gens, ring, track=False):
    """Groebner basis; with track=True also returns cofactors over gens."""
    basis = []
    cofs = []
    for i, g in enumerate(gens):
        if g:
            basis.append(g)
            cofs.append({i: ring.const(1)})
    pairs = [(i, j) for i in range(len(basis)) for j in range(i + 1, len(basis))]
    while pairs:
        # normal selection: smallest lcm first
        pairs.sort(key=lambda ij: ring.order_key(
            mon_lcm(basis[ij[0]].lead()[0], basis[ij[1]].lead()[0])
        ))
        i, j = pairs.pop(0)
        mi, mj = basis[i].lead()[0], basis[j].lead()[0]
        if mon_lcm(mi, mj) == mon_mul(mi, mj):
            continue  # coprime lead terms: S-poly reduces to zero
        s, tf, tg = s_polynomial(basis[i], basis[j])
        qs, r = divide(s, basis, track=track)
        if not r:
            continue
        if track:
            combo = {}
            _acc(combo, tf, cofs[i])
            _acc(combo, -tg, cofs[j])
            for k, q in enumerate(qs):
                if q:
                    _acc(combo, -q, cofs[k])
            cofs.append(combo)
        basis.append(r)
        new = len(basis) - 1
        pairs.extend((k, new) for k in range(new))
    if track:
        return basis, cofs
    return basis


def _acc(combo, mult, cof):
    for i, c in cof.items():
        term = mult * c
        if i in combo:
            term = combo[i] + term
        if term:
            combo[i] = term
        else:
            combo.pop(i, None)


def reduced_groebner(gens, ring, track=False):
    """The reduced Groebner basis: monic, mutually reduced, lead-sorted."""
    if track:
        basis, cofs = buchberger(gens, ring, track=True)
    else:
        basis = buchberger(gens, ring)
        cofs = [None] * len(basis)
    # minimalize: keep only elements whose lead no kept lead divides,
    # scanning smallest leads first
    idx = sorted(range(len(basis)), key=lambda i: ring.order_key(basis[i].lead()[0]))
    keep = []
    lead_kept = []
    for i in idx:
        mi = basis[i].lead()[0]
        if not any(mon_divides(lt, mi) for lt in lead_kept):
            keep.append(i)
            lead_kept.append(mi)
    basis = [basis[i] for i in keep]
    cofs = [cofs[i] for i in keep]
    # full interreduction: reduce the tail of each against all the others
    changed = True
    while changed:
        changed = False
        for i in range(len(basis)):
            others = basis[:i] + basis[i + 1 :]
            qs, r = divide(basis[i], others, track=track)
            if r.terms != basis[i].terms:
                changed = True
                if not r:
                    del basis[i]
                    del cofs[i]
                    break
                if track:
                    combo = dict(cofs[i])
                    other_cofs = cofs[:i] + cofs[i + 1 :]
                    for k, q in enumerate(qs):
                        if q:
                            _acc(combo, -q, other_cofs[k])
                    cofs[i] = combo
                basis[i] = r
    order = sorted(range(len(basis)), key=lambda i: ring.order_key(basis[i].lead()[0]))
    basis = [basis[i] for i in order]
    cofs = [cofs[i] for i in order]
    out = []
    out_cofs = []
    for g, cof in zip(basis, cofs):
        _, lc = g.lead()
        out.append(g.scale(FONE / lc))
        if track:
            out_cofs.append({i: c.scale(FONE / lc) for i, c in cof.items()})
    if track:
        return out, out_cofs
    return out


def lift_through_ideal(p, ring):
    """Write normal_form-zero p as sum c_g * g over the defining ideal.

    Returns the cofactor list aligned with ring.defining_ideal(), or None if
    p is not in the ideal.
    """
    gens = ring.defining_ideal()
    gb, cofs = reduced_groebner(gens, ring, track=True)
    qs, r = divide(p, gb, track=True)
    if r:
        return None
    out = [ring.const(0) for _ in gens]
    for j, q in enumerate(qs):
        if q:
            for i, c in cofs[j].items():
                out[i] = out[i] + q * c
    return out
