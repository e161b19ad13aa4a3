"""Find six equiangular quaternionic lines in HP^2, prove the solution exists, then re-check the proof.

    python demos/search_certify_verify.py
"""
from fractions import Fraction
from itertools import combinations

from tightcodes.certify import certify
from tightcodes.solver import find_configuration
from tightcodes.systems import SpaceDescriptor, build_system, decode_solution
from tightcodes.verify import verify_certificate

desc = SpaceDescriptor.parse("hp d=3 n=6")
cs = build_system(desc)
print(f"{desc}: {cs.nvars} unknowns, {cs.neqs} equations")

res = find_configuration(desc, attempts=5)
print(f"search outcome {res.outcome}, residual {res.residual_linf:.2e} after {res.iterations} Newton steps")

config = decode_solution(cs, res.point)
G = config.gram()
worst = max(abs(G[i, j] - 0.2) for i, j in combinations(range(config.N), 2))
print(f"largest deviation of |<x_i, x_j>|^2 from 1/5: {worst:.2e}")

# exact arithmetic from here on: x0 is rounded to dyadic rationals before any check
cert = certify(cs, res.point)
print(f"certificate verdict {cert.verdict}, margin {float(cert.margin):.3e}, "
      f"solution manifold of dimension {cert.manifold_dim}")
print(f"  residual {float(cert.resid):.2e}  |I - J T| {float(cert.defect):.2e}  "
      f"variation {float(cert.variation):.2e}  eps {cert.epsilon}")

rep = verify_certificate(cert)
print(f"independent re-check: {rep.verdict}" + ("" if rep.ok else f" problems={rep.problems}"))
assert rep.ok and cert.epsilon == Fraction(1, 10**9)
