"""sceneweave: narrative-to-scene-timeline orchestration.

Pipeline: segment a story into event windows, let the director/action/
motion/decoration agents plan each window over typed function libraries
(with a bounded textual self-check loop), compile the ordered plans into a
frame-accumulated scene timeline, and emit the timeline interchange file
plus the render script.
"""

from .kernels import BACKEND as KERNEL_BACKEND

__version__ = "0.1.0"

__all__ = ["KERNEL_BACKEND", "__version__"]
