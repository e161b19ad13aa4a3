"""Size bounds for tight simplices and the linear programming certificates behind them.

    python demos/bounds_and_lp.py
"""
from tightcodes.analysis import (
    ZonalParams,
    gale_min_size,
    jacobi_poly,
    lp_verify,
    max_size,
    simplex_kernel_value,
    tight_alpha,
    witness_poly,
)

for space in ("RP2", "CP2", "HP2", "OP2", "G(2,4)", "G(2,5)"):
    top = max_size(space)
    line = f"{space:>7}: at most {top:2d} points, tight inner product at that size {tight_alpha(space, top)}"
    if space[0] in "RCH":
        line += f", Gale dual needs N >= {gale_min_size(space)}"
    print(line)

for space in ("HP2", "OP2"):
    coeffs = ", ".join(str(c) for c in jacobi_poly(2, ZonalParams.for_space(space)))
    print(f"degree 2 zonal polynomial of {space} in z (ascending): {coeffs}")

# five equiangular lines in RP^2 would make this zonal Gram sum nonnegative
print("RP2, N = 5, degree 4 kernel value:", simplex_kernel_value("RP2", 5, 4))

for N, d, tag in ((6, 3, "H"), (15, 3, "H"), (27, 3, "O")):
    cert = witness_poly(N, d, tag)
    bound, ok = lp_verify(cert)
    print(f"witness for {N} points over {tag}, d = {d}: bound {bound}, valid {ok}, z0 = {cert.z0}")
