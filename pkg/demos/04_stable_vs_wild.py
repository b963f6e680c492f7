"""Stable versus wild chains: kernel gaps and their survival in the limit.

Run:  python3 demos/04_stable_vs_wild.py
"""

from nilcantor.dynamics import lqa_witness, trivial_action_kernel, wildness_certificate
from nilcantor.towers import ex41, stable_chain, wild_chain

# The trivial-action kernel at cylinder level l and depth d: everything
# in Gamma_l that fixes every depth-d coset inside the level-l cylinder.
wild = wild_chain(2, 1)  # one new prime per level, exponents (1 | 2 | 2)
print("wild chain:", wild.label)
print("kernel(l=1, d=2) =", trivial_action_kernel(wild, 1, 2))
print("kernel(l=2, d=2) =", trivial_action_kernel(wild, 2, 2))

# The gap between them is a genuine violation witness: (6,0,0) fixes the
# level-2 cylinder pointwise but moves a coset of the level-1 cylinder.
report = lqa_witness(wild, 1, 2, 2)
print("gap order:", report.kernel_order, " witness:", report.witness)

# Certificates: the wild family keeps opening gaps at every level (each
# new prime contributes q^(n-r)), and those gaps survive the inverse
# limit, so the completion's action is not locally quasi-analytic.
cert = wildness_certificate(wild, 3, 5)
print("\nwild family verdict:", cert.verdict)
for r in cert.reports:
    print(f"  levels ({r.cylinder},{r.refined}): order {r.kernel_order}, persistent={r.persistent}")

# A finite family with a growing prime is stable: all kernels coincide.
stable = stable_chain((2, 3), (1, 1), (2, 2), (5,))
print("\nfinite family verdict:", wildness_certificate(stable, 3, 4).verdict)

# The one-prime chain shows why persistence matters: its finite-depth
# kernels do differ, but the gaps have growing lattice exponents and die
# in the inverse limit, so the verdict is still stable.
cert41 = wildness_certificate(ex41(2), 3, 6)
print("\none-prime chain verdict:", cert41.verdict)
for r in cert41.reports:
    print(f"  levels ({r.cylinder},{r.refined}): order {r.kernel_order}, persistent={r.persistent}")
