# %% [markdown]
# Cantor and Hamming distances on codes
#
# The Cantor distance only sees the first difference, so it is an
# ultrametric.  Words sharing a prefix of length p sit in an (n-p)-cube.

# %%
import itertools

from profinite import build_partition_tree, cantor_distance, encode, hamming, make_tower, subcube

print(cantor_distance("0110", "0100"), hamming("0110", "0100"))

# %% every triangle in the 4-cube is isosceles with the two longest sides equal
ws = ["".join(b) for b in itertools.product("01", repeat=4)]
worst = max(cantor_distance(x, z) - max(cantor_distance(x, y), cantor_distance(y, z))
            for x, y, z in itertools.product(ws, repeat=3))
print("max violation of the strong triangle inequality:", worst)

# %% codes of the binary tower at depth 6
T = make_tower("binary", 6)
tree = build_partition_tree(T)
codes = [encode(tree, x).bits for x in T.coherent_elements()]
s = subcube(codes[8:12])
print("prefix", s.fixed_prefix, "spans", len(s), "vertices:", s.vertices())
