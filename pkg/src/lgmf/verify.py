"""Self-check suites run by ``lgmf verify``.

Each suite returns a list of Check records; a suite passes when every
check passes.  The suites are deterministic for a given seed.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Callable, Dict, List

from .expr import PolyRing
from .ideal import record_bases
from .localize import (FiberAt, check_homotopy, fiber_nonzero, in_support, is_nullhomotopic,
                       parse_point, parse_prime, trim_at_point)
from .mfcore import (LGModel, cone, direct_sum, dual, dual_dual_isomorphism, half_tensor,
                     koszul, make_morphism, scale, shift, sheaf_hom, tensor, tensor_power,
                     zero_morphism)
from .singloc import (build_nonvanishing_mf, in_singloc, jacobian_numbers,
                      witness_decomposition)
from .tensorgeom import (LAMBDAS, check_support_data_axioms, generator_probe,
                         nilpotence_search, random_factorization)


@dataclass
class Check:
    name: str
    passed: bool
    detail: str = ""

    def as_dict(self):
        return {"name": self.name, "passed": self.passed, "detail": self.detail}


def cone_model() -> LGModel:
    return LGModel.parse(["x", "y", "z", "w"], ["x*y - z*w"], "w")


def fat_line_model(n: int) -> LGModel:
    return LGModel.parse(["x", "y"], [f"x^{n}"], "y")


def cone_points(count: int, seed: int = 1):
    """Deterministic rational points on xy = zw with small coordinates."""
    pts = []
    for x, y, z in product(range(-1, 3), repeat=3):
        if z:
            w = Fraction(x * y, z)
            pts.append((x, y, z, w))
        elif x * y == 0:
            pts.extend([(x, y, 0, 0), (x, y, 0, 1)])
    pts = sorted(set(pts))
    rng = random.Random(seed)
    rng.shuffle(pts)
    keep = [(0, 0, 0, 0), (0, 0, 1, 0), (0, 0, 2, 0)]
    rest = [p for p in pts if p not in keep]
    return [parse_point(",".join(str(c) for c in p)) for p in keep + rest[:count - len(keep)]]


def cone_pool(model: LGModel):
    ring = model.ring
    texts = ["x", "y", "z", "w", "z-1", "x+y", "w-z", "1", "0", "x*z", "y-2", "z+w"]
    return [ring.parse(t) for t in texts]


def _timed(name, limit, fn):
    t0 = time.perf_counter()
    checks = fn()
    dt = time.perf_counter() - t0
    checks.append(Check(f"{name}: runtime", dt < limit, f"limit {limit}s"))
    return checks


def suite_ac1() -> List[Check]:
    def run():
        M = cone_model()
        want = {"x,y,z,w": False, "x,y,z-1,w": True, "x,y,w": True}
        out = []
        for spec, expect in want.items():
            got = in_singloc(M, parse_prime(spec, M.ring))
            out.append(Check(f"ac1: singloc <{spec}>", got == expect, f"got {got}, want {expect}"))
        return out
    return _timed("ac1", 5, run)


def suite_ac2() -> List[Check]:
    def run():
        out = []
        for n in (2, 3):
            M = fat_line_model(n)
            p = parse_prime("x,y", M.ring)
            rel = in_singloc(M, p)
            sing = jacobian_numbers(M, p).sing_X0
            out.append(Check(f"ac2: x^{n}: singloc false", rel is False, f"got {rel}"))
            out.append(Check(f"ac2: x^{n}: X0 Jacobian-singular", sing is True, f"got {sing}"))
        return out
    return _timed("ac2", 2, run)


def suite_ac3() -> List[Check]:
    def run():
        M = cone_model()
        origin = parse_point("0,0,0,0")
        out = []
        for a in (1, 2, 3):
            p = parse_point(f"0,0,{a},0")
            w = witness_decomposition(M, p)
            total = w.r * M.potential
            for m, n in w.pairs:
                total = total - m * n
            ok = M.is_zero(total) and w.verify(M, p)
            out.append(Check(f"ac3: a={a}: r*W = sum m*n", ok, f"r={w.r}, {len(w.pairs)} pairs"))
            K = build_nonvanishing_mf(M, p, w)
            out.append(Check(f"ac3: a={a}: K supported at p", in_support(K, p)))
            out.append(Check(f"ac3: a={a}: K not supported at origin", not in_support(K, origin)))
        return out
    return _timed("ac3", 10, run)


def suite_ac4(count: int = 200, npoints: int = 20, seed: int = 1) -> List[Check]:
    def run():
        M = cone_model()
        pool = cone_pool(M)
        pts = cone_points(npoints, seed)
        rng = random.Random(seed)
        bad = []
        for k in range(count):
            F = random_factorization(M, rng, pool, depth=rng.randint(0, 3))
            for p in pts:
                a = in_support(F, p)
                b = fiber_nonzero(F, p)
                c = trim_at_point(F, p).total_rank > 0
                if not (a == b == c):
                    bad.append(f"object {k} at {p.label()}: {a},{b},{c}")
        return [Check("ac4: three-way support agreement", not bad,
                      f"{count} objects x {len(pts)} points; {len(bad)} discrepancies"
                      + (f"; first: {bad[0]}" if bad else ""))]
    return _timed("ac4", 60, run)


def random_linear_product(ring: PolyRing, rng: random.Random):
    """A product of one or two factors v - c with c in -2..2 (or a constant)."""
    if rng.random() < 0.1:
        return ring.constant(rng.choice([0, 1]))
    f = ring.one
    for _ in range(rng.randint(1, 2)):
        f = f * (ring.var(rng.choice(ring.names)) - rng.randint(-2, 2))
    return f


def suite_ac5(npairs: int = 50, seed: int = 1) -> List[Check]:
    def run():
        M = LGModel.parse(["x", "y", "z", "w"], [], "0")
        ring = M.ring
        rng = random.Random(seed)
        grid = [parse_point(",".join(map(str, c))) for c in product(range(-2, 3), repeat=4)]
        ks = [koszul(M, random_linear_product(ring, rng), random_linear_product(ring, rng))
              for _ in range(npairs + 1)]
        bad20, bad21, n20, n21 = [], [], 0, 0
        for i in range(npairs):
            E, F = ks[i], ks[i + 1]
            f, g = E.phi1[0, 0], E.phi0[0, 0]
            T = tensor(E, F)
            for p in grid:
                vE = p.is_zero(E.potential)
                if vE:
                    n20 += 1
                    zero_locus = p.is_zero(f) and p.is_zero(g)
                    if in_support(E, p) != zero_locus:
                        bad20.append(f"pair {i} at {p.label()}")
                if vE and p.is_zero(F.potential):
                    n21 += 1
                    if in_support(T, p) != (in_support(E, p) and in_support(F, p)):
                        bad21.append(f"pair {i} at {p.label()}")
        return [Check("ac5: koszul support = joint zero locus", not bad20,
                      f"{n20} point checks; {len(bad20)} failures"),
                Check("ac5: tensor support = intersection", not bad21,
                      f"{n21} point checks; {len(bad21)} failures")]
    return _timed("ac5", 60, run)


def suite_ac6() -> List[Check]:
    def run():
        M = LGModel.parse(["x"], ["x^2"], "0")
        Z = koszul(M, 0, 0)
        f = make_morphism(Z, Z, [["x"]], [["x"]])
        p = parse_point("0")
        fiber = is_nullhomotopic(f, FiberAt(p)).verdict
        res = nilpotence_search(f, [p], max_n=8, degree_bound=4)
        zero = res.found and all(not e for r in res.h0 + res.h1 for e in r)
        ok_h = res.found and check_homotopy(tensor_power(f, res.n), res.h0, res.h1)
        return [Check("ac6: fiber of f is zero at x=0", fiber == "yes", fiber),
                Check("ac6: nilpotence n = 2", res.n == 2, f"n={res.n}"),
                Check("ac6: explicit zero homotopy", bool(zero and ok_h))]
    return _timed("ac6", 2, run)


def axiom_corpus(M: LGModel):
    """K = koszul(w, 1-z) ⊗ koszul(x, y) and the objects built at (0,0,a,0)
    for a = 2, 3."""
    K = tensor(koszul(M, "w", "1-z"), koszul(M, "x", "y"))
    return [K] + [build_nonvanishing_mf(M, parse_point(f"0,0,{a},0")) for a in (2, 3)]


def suite_ac7(seed: int = 1) -> List[Check]:
    def run():
        M = cone_model()
        pts = [parse_point(f"0,0,{t},0") for t in range(4)]
        rep = check_support_data_axioms(axiom_corpus(M), pts, seed=seed, lambdas=LAMBDAS)
        out = [Check(f"ac7: axiom ({k})", rep.axiom_passed(k),
                     f"{rep.checks[k]} checks") for k in ("1", "2", "3", "4", "5")]
        out.append(Check("ac7: lambda-invariance of supports", rep.axiom_passed("lambda"),
                         f"{rep.checks['lambda']} checks"))
        out.append(Check("ac7: origin covered by no object", rep.covered.get("0,0,0,0") is False))
        K1 = build_nonvanishing_mf(M, parse_point("0,0,1,0"))
        probe = generator_probe(M, K1, [parse_point("0,0,2,0")])
        out.append(Check("ac7: probe flags (0,0,2,0)", probe.flagged == ["0,0,2,0"],
                         f"flagged {probe.flagged}"))
        return out
    return _timed("ac7", 30, run)


def suite_ac8(count: int = 60, seed: int = 1) -> List[Check]:
    def run():
        M = cone_model()
        pool = cone_pool(M)
        rng = random.Random(seed)
        fails: Dict[str, int] = {k: 0 for k in ("invariant", "T2", "cone0", "dualdual",
                                                 "certificates")}
        with record_bases() as bases:
            for _ in range(count):
                E = random_factorization(M, rng, pool, depth=rng.randint(0, 2))
                F = random_factorization(M, rng, pool, depth=rng.randint(0, 1))
                G = koszul(M, E.potential, 1)
                outs = [shift(E), dual(E), tensor(E, F), sheaf_hom(E, F), direct_sum(E, G),
                        scale(3, E), cone(zero_morphism(E, G))]
                for o in outs:
                    try:
                        o.validate()
                    except ValueError:
                        fails["invariant"] += 1
                if shift(shift(E)) != E:
                    fails["T2"] += 1
                if cone(zero_morphism(G, E)) != direct_sum(E, shift(G)):
                    fails["cone0"] += 1
                DD = dual(dual(E))
                if (DD.phi1 != -E.phi1 or DD.phi0 != -E.phi0):
                    fails["dualdual"] += 1
                try:
                    dual_dual_isomorphism(E)
                except ValueError:
                    fails["dualdual"] += 1
            # exercise the Gröbner engine on the ideals the criteria use
            for spec in ("x,y,z,w", "x,y,z-1,w", "x,y,w"):
                in_singloc(M, parse_prime(spec, M.ring))
            witness_decomposition(M, parse_point("0,0,1,0"))
        fails["certificates"] = sum(1 for b in bases if not b.check_certificates())
        return [Check(f"ac8: {k}", v == 0, f"{v} failures"
                      + (f" over {len(bases)} bases" if k == "certificates" else ""))
                for k, v in fails.items()]
    return _timed("ac8", 60, run)


def suite_golden() -> List[Check]:
    out = []
    M = cone_model()
    for spec, expect in {"x,y,z,w": False, "x,y,z-1,w": True, "x,y,w": True}.items():
        got = in_singloc(M, parse_prime(spec, M.ring))
        out.append(Check(f"cone: singloc <{spec}>", got == expect, f"got {got}"))
    K = tensor(koszul(M, "w", "1-z"), koszul(M, "x", "y"))
    out.append(Check("cone: koszul(w,1-z) x koszul(x,y) has potential w",
                     K.potential == M.potential))
    out.append(Check("cone: K supported at (0,0,1,0)", in_support(K, parse_point("0,0,1,0"))))
    out.append(Check("cone: K not supported at origin", not in_support(K, parse_point("0,0,0,0"))))
    w = witness_decomposition(M, parse_prime("x,y,w", M.ring))
    out.append(Check("cone: witness at <x,y,w>", w.verify(M, parse_prime("x,y,w", M.ring)),
                     f"r={w.r}"))
    for n in (2, 3):
        F = fat_line_model(n)
        p = parse_prime("x,y", F.ring)
        out.append(Check(f"x^{n}: singloc empty at the point", not in_singloc(F, p)))
        out.append(Check(f"x^{n}: X0 singular", jacobian_numbers(F, p).sing_X0))
    probe = generator_probe(M, K, [parse_point("0,0,2,0")])
    out.append(Check("cone: K is not a tensor generator", probe.refuted))
    return out


SUITES: Dict[str, Callable[[], List[Check]]] = {
    "golden": suite_golden,
    "ac1": suite_ac1, "ac2": suite_ac2, "ac3": suite_ac3, "ac4": suite_ac4,
    "ac5": suite_ac5, "ac6": suite_ac6, "ac7": suite_ac7, "ac8": suite_ac8,
}


# Older command lines name the golden suite by this alias.
ALIASES = {"paper-examples": "golden"}


def run_suite(name: str) -> List[Check]:
    name = ALIASES.get(name, name)
    if name == "all":
        out = []
        for key in SUITES:
            out.extend(SUITES[key]())
        return out
    return SUITES[name]()
