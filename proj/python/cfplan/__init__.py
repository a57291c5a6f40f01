"""Collision-free 2-link arm path planning in the latent space of a cGAN."""

from ._core import *  # noqa: F401,F403
from ._core import __version__  # noqa: F401
