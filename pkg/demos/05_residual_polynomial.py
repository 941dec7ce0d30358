# %% [markdown]
# # The numerator polynomial
#
# Over GF(2) the generating function is a(q) / (1 - q^L) with L the period.
# Dividing 1 - q^L by D(q) exactly recovers a(q); its degree is
# L - k(k+1)/2, which is why the last k(k+1)/2 - 1 values of each period
# are even.

# %%
from pnkparity import denominator_poly, residual_poly
from pnkparity.polyring import mul

for k in range(1, 9):
    a = residual_poly(k)
    assert mul(a.poly, denominator_poly(k, 2)).coeffs[-1] == 1
    print(f"k={k}  L={a.period:5d}  deg a={a.degree:5d}  L - k(k+1)/2 = {a.expected_degree}")

print(residual_poly(2).poly)
