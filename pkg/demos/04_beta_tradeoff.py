"""Reflection coefficient: reliability versus security.

A stronger backscatter reflection makes the tag easier to hear but adds
interference for both users and for the eavesdropper.  User outages rise with
beta while intercept probabilities fall; the BD outage has an interior optimum.
"""

import numpy as np

from ambc_noma import IqiProfile, SystemParams, evaluate
from ambc_noma.montecarlo import apply_axis

prof = IqiProfile.uniform(1.1, 5.0)
betas = np.round(np.arange(0.02, 0.81, 0.06), 2)
for a1 in (0.1, 0.2):
    p25 = SystemParams(a1=a1, iqi=prof).with_snr_db(25.0)
    p10 = SystemParams(a1=a1, iqi=prof).with_snr_db(10.0)
    print(f"\n== a1 = {a1} (OP at 25 dB, IP at 10 dB) ==")
    print(f"{'beta':>5} {'op_far':>8} {'op_near':>8} {'op_bd':>8} {'ip_far':>8} {'ip_near':>8}")
    bd = []
    for b in betas:
        q25, q10 = apply_axis(p25, "beta", b), apply_axis(p10, "beta", b)
        row = [evaluate(m, q25) for m in ("op_far", "op_near", "op_bd")]
        row += [evaluate(m, q10) for m in ("ip_far", "ip_near")]
        bd.append(row[2])
        print(f"{b:5.2f} " + " ".join(f"{v:8.4f}" for v in row))
    print(f"BD outage is lowest at beta = {betas[int(np.argmin(bd))]:.2f}")
