"""How I/Q imbalance reshapes what each receiver sees.

An ideal front end passes the signal untouched.  With mismatch, part of every
symbol leaks into its mirror image, which shows up as residual interference
after SIC (B, M) and as a split of the backscatter power into a useful part Q
and an interfering part A.
"""

from ambc_noma import IqiProfile

A1, BETA = 0.1, 0.1

print(f"{'profile':>12} {'rx':>5} {'xi':>8} {'A':>9} {'Q':>9} {'B':>9} {'M':>9} {'D':>7}")
for label, prof in (("ideal", IqiProfile.ideal()),
                    ("1.05 / 20deg", IqiProfile.uniform(1.05, 20.0)),
                    ("1.1 / 5deg", IqiProfile.uniform(1.1, 5.0))):
    for rx in ("near", "far", "eve"):
        c = prof.composites(rx, A1, BETA)
        print(f"{label:>12} {rx:>5} {c.xi:8.5f} {c.a_coeff:9.2e} {c.q_coeff:9.2e} "
              f"{c.b_coeff:9.2e} {c.m_coeff:9.2e} {c.d_coeff:7.4f}")

# The near user needs xi*a1 > (a2*B + M) * th_x1 to ever decode x1.
prof = IqiProfile.uniform(1.05, 20.0)
c = prof.composites("near", A1, BETA)
margin = c.xi * A1 - ((1 - A1) * c.b_coeff + c.m_coeff) * 2.0
print(f"\nnear-user x1 margin at 1.05/20deg: {margin:+.4f}"
      f" ({'decodable' if margin > 0 else 'never decodable, OP = 1'})")
