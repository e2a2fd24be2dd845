# %% [markdown]
# Binary codes for coherent elements
#
# The partition tree halves each ordered cell; a singleton at level k is
# replaced by its fiber at level k+1.  Block codes use one fixed-width word per
# level whose prefix recovers the previous level.

# %%
from profinite import (block_encode, block_truncate, build_partition_tree, decode, encode,
                       make_tower)

T = make_tower("cyclotomic", 2, 3)
tree = build_partition_tree(T)

# %% every element and its code
for x in T.coherent_elements():
    print(",".join(x.labels), "->", encode(tree, x).bits)

# %% a proper prefix decodes to a cell of the partition
cell = decode(tree, "10")
print("prefix 10 ->", [",".join(y.labels) for y in cell.coherent_elements()])

# %% refinement: codes at depth 2 extend codes at depth 1
short = build_partition_tree(T.truncate(1))
for x in T.coherent_elements():
    y = T.truncate(1).lift(x.components[0].index)
    print(encode(short, y).bits, "<", encode(tree, x).bits)

# %% block codes and the truncation constraint
T3 = make_tower("cyclotomic", 3, 3)
for x in list(T3.coherent_elements())[:6]:
    code = block_encode(T3, x)
    print(code, [block_truncate(code, k) == (code.stripped(k - 1) if k > 1 else "")
                 for k in range(1, 4)])
