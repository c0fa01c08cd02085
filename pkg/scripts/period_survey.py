"""Pure periods of the trace sequence b_n = Tr(xi alpha^n) mod L over a grid of moduli."""

import argparse
from dataclasses import dataclass

from powfrac import IntPolynomial, classify
from powfrac.analyze import pure_period_mod
from powfrac.field import FieldElement, trace_sequence


@dataclass
class Config:
    polys: tuple = ("z^2-z-1", "z^3-z-1", "z^4-z^3-z^2-z+1", "z^10+z^9-z^7-z^6-z^5-z^4-z^3+z+1")
    max_L: int = 12


def main(cfg: Config) -> None:
    print("polynomial,L,period,pure")
    for text in cfg.polys:
        a = classify(IntPolynomial.parse(text))
        c = a.minpoly.coeffs
        A = [c[k] for k in range(a.degree - 1, -1, -1)]
        init = trace_sequence(FieldElement(a, (1,)), a.degree)
        for L in range(2, cfg.max_L + 1):
            rep = pure_period_mod(A, init, L)
            print(f"{text},{L},{rep.period},{str(rep.pure).lower()}")


if __name__ == "__main__":
    ap = argparse.ArgumentParser()
    ap.add_argument("--max-L", dest="max_L", type=int, default=Config.max_L)
    main(Config(**vars(ap.parse_args())))
