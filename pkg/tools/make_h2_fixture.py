"""Generate the diatomic-hydrogen fermionic fixture used by the tests.

Computes STO-3G integrals for H2 at 0.735 angstrom bond length from
closed-form s-Gaussian formulas (overlap, kinetic, nuclear attraction,
two-electron repulsion with the Boys function), forms the
symmetry-determined bonding/antibonding molecular orbitals, and writes
the normal-ordered second-quantized Hamiltonian as a term-list JSON.

Mode order: 0 = bonding up, 1 = bonding down, 2 = antibonding up,
3 = antibonding down.

Run once; the output is committed as data/h2_sto3g_0p735.json.
"""

from __future__ import annotations

import json
import math
import sys
from pathlib import Path

BOHR_PER_ANGSTROM = 1.0 / 0.529177210903

# STO-3G hydrogen 1s: exponents and contraction coefficients for
# normalized primitives.
EXPONENTS = (3.425250914, 0.6239137298, 0.1688554040)
COEFFS = (0.1543289673, 0.5353281423, 0.4446345422)


def boys0(t: float) -> float:
    if t < 1e-12:
        return 1.0 - t / 3.0
    return 0.5 * math.sqrt(math.pi / t) * math.erf(math.sqrt(t))


def norm_s(alpha: float) -> float:
    return (2.0 * alpha / math.pi) ** 0.75


def prim_overlap(a: float, b: float, ra: float, rb: float) -> float:
    p = a + b
    return (math.pi / p) ** 1.5 * math.exp(-a * b / p * (ra - rb) ** 2)


def prim_kinetic(a: float, b: float, ra: float, rb: float) -> float:
    p = a + b
    mu = a * b / p
    r2 = (ra - rb) ** 2
    return mu * (3.0 - 2.0 * mu * r2) * (math.pi / p) ** 1.5 * math.exp(
        -mu * r2
    )


def prim_nuclear(a: float, b: float, ra: float, rb: float, rc: float) -> float:
    """<a@ra| -1/|r-rc| |b@rb> for unit nuclear charge."""
    p = a + b
    rp = (a * ra + b * rb) / p
    return (
        -2.0
        * math.pi
        / p
        * math.exp(-a * b / p * (ra - rb) ** 2)
        * boys0(p * (rp - rc) ** 2)
    )


def prim_eri(a, b, c, d, ra, rb, rc, rd) -> float:
    """(ab|cd) in chemist notation for s primitives on a line."""
    p = a + b
    q = c + d
    rp = (a * ra + b * rb) / p
    rq = (c * rc + d * rd) / q
    pref = 2.0 * math.pi**2.5 / (p * q * math.sqrt(p + q))
    expo = math.exp(
        -a * b / p * (ra - rb) ** 2 - c * d / q * (rc - rd) ** 2
    )
    return pref * expo * boys0(p * q / (p + q) * (rp - rq) ** 2)


_PRIMS = tuple(
    (alpha, cc * norm_s(alpha)) for alpha, cc in zip(EXPONENTS, COEFFS)
)


def h2_integrals(distance_bohr: float):
    centers = (0.0, distance_bohr)

    def one_body(fun, i, j):
        ra, rb = centers[i], centers[j]
        return sum(
            na * nb * fun(a, b, ra, rb)
            for a, na in _PRIMS
            for b, nb in _PRIMS
        )

    def v_fun(i, j):
        ra, rb = centers[i], centers[j]
        return sum(
            na * nb * prim_nuclear(a, b, ra, rb, rc)
            for a, na in _PRIMS
            for b, nb in _PRIMS
            for rc in centers
        )

    def eri(i, j, k, l):
        ra, rb, rc, rd = (centers[q] for q in (i, j, k, l))
        return sum(
            na * nb * nc * nd * prim_eri(a, b, c, d, ra, rb, rc, rd)
            for a, na in _PRIMS
            for b, nb in _PRIMS
            for c, nc in _PRIMS
            for d, nd in _PRIMS
        )

    s12 = one_body(prim_overlap, 0, 1)
    smat = [[1.0, s12], [s12, 1.0]]
    hcore = [
        [one_body(prim_kinetic, i, j) + v_fun(i, j) for j in range(2)]
        for i in range(2)
    ]
    g = [
        [
            [[eri(i, j, k, l) for l in range(2)] for k in range(2)]
            for j in range(2)
        ]
        for i in range(2)
    ]
    return smat, hcore, g


def mo_basis(s12: float):
    ng = 1.0 / math.sqrt(2.0 * (1.0 + s12))
    nu = 1.0 / math.sqrt(2.0 * (1.0 - s12))
    return [[ng, nu], [ng, -nu]]  # columns: bonding, antibonding


def mo_transform(hcore, g, c):
    h_mo = [[0.0, 0.0], [0.0, 0.0]]
    for p in range(2):
        for q in range(2):
            h_mo[p][q] = sum(
                c[a][p] * c[b][q] * hcore[a][b]
                for a in range(2)
                for b in range(2)
            )
    def eri_mo(p, q, r, s):
        return sum(
            c[a][p] * c[b][q] * c[cc][r] * c[d][s] * g[a][b][cc][d]
            for a in range(2)
            for b in range(2)
            for cc in range(2)
            for d in range(2)
        )
    return h_mo, eri_mo


def build_terms(distance_bohr: float):
    smat, hcore, g = h2_integrals(distance_bohr)
    c = mo_basis(smat[0][1])
    h_mo, eri_mo = mo_transform(hcore, g, c)
    h_g, h_u = h_mo[0][0], h_mo[1][1]
    j_gg = eri_mo(0, 0, 0, 0)
    j_uu = eri_mo(1, 1, 1, 1)
    j_gu = eri_mo(0, 0, 1, 1)
    k_gu = eri_mo(0, 1, 1, 0)
    e_nuc = 1.0 / distance_bohr

    hf_energy = 2.0 * h_g + j_gg + e_nuc
    print(f"S12={smat[0][1]:.4f} h_g={h_g:.4f} h_u={h_u:.4f}")
    print(
        f"J_gg={j_gg:.4f} J_uu={j_uu:.4f} J_gu={j_gu:.4f} K_gu={k_gu:.4f}"
    )
    print(f"RHF energy = {hf_energy:.4f} hartree (expect about -1.117)")

    def num(mode):
        return [["c", mode], ["a", mode]]

    terms = [{"coeff": [e_nuc, 0.0], "ops": []}]
    for mode, h in ((0, h_g), (1, h_g), (2, h_u), (3, h_u)):
        terms.append({"coeff": [h, 0.0], "ops": num(mode)})
    densities = (
        (0, 1, j_gg),
        (2, 3, j_uu),
        (0, 3, j_gu),
        (1, 2, j_gu),
        (0, 2, j_gu - k_gu),
        (1, 3, j_gu - k_gu),
    )
    for a, b, coeff in densities:
        terms.append({"coeff": [coeff, 0.0], "ops": num(a) + num(b)})
    # double excitation: both electrons hop between the orbitals
    terms.append(
        {
            "coeff": [k_gu, 0.0],
            "ops": [["c", 0], ["c", 1], ["a", 3], ["a", 2]],
        }
    )
    terms.append(
        {
            "coeff": [k_gu, 0.0],
            "ops": [["c", 2], ["c", 3], ["a", 1], ["a", 0]],
        }
    )
    # spin-cross orbital exchange: four distinct modes
    terms.append(
        {
            "coeff": [k_gu, 0.0],
            "ops": [["c", 0], ["c", 3], ["a", 1], ["a", 2]],
        }
    )
    terms.append(
        {
            "coeff": [k_gu, 0.0],
            "ops": [["c", 2], ["c", 1], ["a", 3], ["a", 0]],
        }
    )
    return {"n_modes": 4, "hermitian": True, "terms": terms}


def main() -> None:
    out = (
        Path(sys.argv[1])
        if len(sys.argv) > 1
        else Path(__file__).resolve().parents[1] / "data" / "h2_sto3g_0p735.json"
    )
    distance = 0.735 * BOHR_PER_ANGSTROM
    obj = build_terms(distance)
    out.parent.mkdir(parents=True, exist_ok=True)
    with open(out, "w") as fh:
        json.dump(obj, fh, indent=1)
        fh.write("\n")
    print(f"wrote {out} ({len(obj['terms'])} terms)")


if __name__ == "__main__":
    main()
