import numpy as np


def scene(h=192, w=256):
    """Gradient background with a bright disc and a dark bar, uint8."""
    yy, xx = np.mgrid[:h, :w]
    img = 60 + 120 * xx / w
    img[(yy - h // 2) ** 2 + (xx - w // 3) ** 2 < (h // 4) ** 2] = 230
    img[h // 5:h // 5 + 20, w // 2:w - 20] = 15
    return img.astype(np.uint8)
