# %% [markdown]
# # Minimal periods and certificates
#
# p(n, k) mod m is periodic in n.  The crude period m^(k-1) k! is huge; the
# minimal period is the order of q modulo D(q) = (1-q)(1-q^2)...(1-q^k).

# %%
from pnkparity import minimal_period, structural_bound, verify_certificate

for k in range(1, 9):
    L, _ = minimal_period(k, 2)
    print(f"k={k:2d}  minimal period {L:6d}  crude bound {structural_bound(k, 2).value}")

# %% [markdown]
# Each period comes with a certificate: k(k+1)/2 matching residues prove L
# is a period, and a witness for each L/p proves nothing smaller works.

# %%
L, cert = minimal_period(6, 5)
print("k=6, m=5: L =", L)
print("witness divisors:", [w.divisor for w in cert.witnesses])
print("verified:", bool(verify_certificate(cert)))
print(cert.to_json()[:300], "...")
