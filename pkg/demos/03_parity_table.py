# %% [markdown]
# # Odd densities
#
# Because the parity sequence is periodic, the fraction of odd values is
# an exact rational: count odd values over one period.

# %%
from pnkparity import joint_densities, odd_density

for k in range(1, 13):
    print(f"k={k:2d}  odd density {odd_density(k)}")

# %% [markdown]
# Pair column k with column k-1.  Whenever p(n, k-1) is odd, p(n, k) is
# odd exactly as often as it is even.

# %%
for k in range(2, 9):
    r = joint_densities(k)
    print(f"k={k}  (odd,odd)={r.odd_odd}  (even,odd)={r.even_odd}  balanced={r.balanced}")
