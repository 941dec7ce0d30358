# %% [markdown]
# # Even runs and density bounds
#
# The longest block of consecutive even values of p(n, k) has length
# exactly k(k+1)/2 - 1, and one such block closes every period.  So every
# k(k+1)/2 consecutive values include an odd one, which bounds the density
# below by 2/(k(k+1)).

# %%
from pnkparity import check_density_implication, check_density_lower_bound, max_even_run

for k in range(1, 11):
    r = max_even_run(k)
    lb = check_density_lower_bound(k)
    print(f"k={k:2d}  longest even run {r.max_even_run:3d} (k(k+1)/2-1 = {r.bound:3d})"
          f"  at period end: {r.at_period_end}  density {lb.density} >= {lb.bound}")

# %% [markdown]
# A density above 2/3 at k forces at most 2/3 at k + 1.

# %%
for rec in check_density_implication(10):
    print(rec.k, rec.density, "->", rec.next_density, "holds" if rec.holds else "FAILS")
