# coding: utf-8

# # Privacy against utility
#
# Averaged over a few seeds: more budget (epsilon) means less noise, a larger
# m means more noise.

import numpy as np

import dppix
from _scene import scene

img = scene()
seeds = range(10)


def average(params):
    outs = [dppix.pixelize_parallel(img, params, s)[0] for s in seeds]
    return np.mean([dppix.mse(img, o) for o in outs]), np.mean([dppix.ssim(img, o) for o in outs])


print("  eps      mse     ssim")
for eps in (0.1, 0.5, 1.0, 2.0, 8.0):
    print("%5.1f %8.1f %8.4f" % ((eps,) + average(dppix.PrivacyParams(eps, 16, 16))))

print("\n   m      mse")
for m in (1, 4, 16, 64):
    print("%4d %8.1f" % (m, average(dppix.PrivacyParams(0.5, m, 16))[0]))

# Larger grids average more pixels, so noise drops while the blur grows.

print("\n   b      mse")
for b in (4, 8, 16, 32):
    print("%4d %8.1f" % (b, average(dppix.PrivacyParams(0.5, 16, b))[0]))
