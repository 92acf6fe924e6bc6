"""
Cumulative XOR with seven Wang tiles
====================================

Bottom row: a root tile and the input bits. Each tile in the row above reads
the bit below (south glue) and the running result to its left (west glue).
"""

from strandbench import tiling

x = [1, 1, 0, 1, 0, 0, 1]
y, grid = tiling.run_xor(x, y0=0)
print(grid.render())
print("x =", x)
print("y =", y)

# the truth table, one tile step per row, keyed by (previous y, x)
for (yp, xi), out in sorted(tiling.xor_truth_table().items()):
    print(f"y_prev={yp} x={xi} -> {out}")

# random-order growth. With two glues required per attachment every order
# converges on the same grid; with one glue a tile can commit too early.
for temperature in (2, 1):
    ok = 0
    for seed in range(50):
        res = tiling.assemble_generic(tiling.XOR_TILESET, tiling.xor_seed(x, 0), 40, seed, temperature)
        try:
            ok += tiling.readout(res.grid, "output") == y
        except tiling.ReadoutError:
            pass
    print(f"temperature {temperature}: {ok}/50 seeds read out the right answer")
