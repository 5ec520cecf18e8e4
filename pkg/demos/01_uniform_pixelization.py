# coding: utf-8

# # Uniform pixelization
#
# Every b x b grid of the image is replaced by its mean plus Laplace noise.
# The noise scale depends on the budget epsilon and on m, the number of
# pixels two "neighbouring" images may differ in.

import numpy as np

import dppix
from _scene import scene

img = scene()
print(img.shape, img.dtype)

# Sensitivity of one grid mean and the matching noise scale:

params = dppix.PrivacyParams(epsilon=0.5, m=16, b=16)
print("delta =", params.delta, " sigma =", params.sigma)

# The seed keys the noise. Same seed, same output; different seed, different noise.

out, means = dppix.pixelize_parallel(img, params, seed=2024)
again, _ = dppix.pixelize_parallel(img, params, seed=2024)
other, _ = dppix.pixelize_parallel(img, params, seed=7)
print("same seed identical:", np.array_equal(out, again))
print("other seed identical:", np.array_equal(out, other))

# `means` holds one uint8 per grid. That is all that needs to be stored.

print("grid means:", means.values.shape)

# The loop-by-loop reference gives exactly the same pixels.

ref = dppix.pixelize_reference(img, params, seed=2024)
print("reference == parallel:", np.array_equal(ref, out))

# Utility against the original:

print("mse  = %.1f" % dppix.mse(img, out))
print("ssim = %.4f" % dppix.ssim(img, out))

# Without noise the picture is just a mosaic (and not private at all).

plain, _ = dppix.pixelize_parallel(img, params, seed=0, noise=False)
print("noiseless mse = %.1f" % dppix.mse(img, plain))
