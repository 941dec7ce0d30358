# %% [markdown]
# # Three ways to compute p(n, k)
#
# p(n, k) counts partitions of n into parts of size at most k.  The package
# has three engines that must agree: exact integers, residues mod m, and a
# bit-packed parity stream.

# %%
from pnkparity import PartitionParams, exact_values, mod_values, parity_stream, self_check

print("p(n, 4) for n = 0..10:", exact_values(4, 10))

# %% [markdown]
# Residues mod m come from the same recurrence run in Z/m, so they never
# overflow.  Windows can start anywhere.

# %%
window = mod_values(PartitionParams(k=5, m=3), n_start=1000, count=12)
print("p(n, 5) mod 3 for n = 1000..1011:", window.values.tolist())

# %% [markdown]
# The parity engine packs 64 values per word, least significant bit first.

# %%
stream = parity_stream(10, 0, 10**6)
print("first word:", hex(int(stream.words[0])))
print("odd values among the first million:", stream.popcount())

# %%
print("engines agree on k=7, m=2, n in [0, 2000):", bool(self_check(7, 2, range(0, 2000))))
