"""
8-bit raster file I/O: PNG (gray / RGB), binary PGM (P5) and binary PPM (P6).

Decoding maps bytes straight to 0.0-255.0. Encoding rounds half away from zero and
then clamps to 0-255, so any processed buffer can be written.
"""

from __future__ import annotations

import logging
from pathlib import Path
from typing import Union

import numpy as np
from PIL import Image, UnidentifiedImageError

from image_core.buffer import ImageBuffer
from image_core.exceptions import (
    ImageReadException,
    ImageWriteException,
    UnsupportedImageFormatException,
)

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]

PNG_SIGNATURE = b"\x89PNG\r\n\x1a\n"
NETPBM_MAGICS = (b"P5", b"P6")

# extension -> Pillow format name (Pillow writes P5 for "L" and P6 for "RGB" under PPM)
SAVE_FORMATS = {
    ".png": "PNG",
    ".pgm": "PPM",
    ".ppm": "PPM",
}


def _sniff_format(path: Path) -> str:
    try:
        with open(path, "rb") as f:
            head = f.read(8)
    except OSError as e:
        raise ImageReadException(f"unreadable file: {path}: {e}") from e
    if head.startswith(PNG_SIGNATURE):
        return "PNG"
    if head[:2] in NETPBM_MAGICS:
        return "PPM"
    raise UnsupportedImageFormatException(f"unsupported format: {path} (expected PNG, binary PGM or binary PPM)")


def load_image(path: PathLike, *, drop_alpha: bool = False) -> ImageBuffer:
    """
    Decode an 8-bit PNG/PGM/PPM file.

    Gray files give 1 channel, color files 3. Images with an alpha channel are rejected
    unless ``drop_alpha`` is set, in which case alpha is discarded (not composited).
    """
    p = Path(path)
    fmt = _sniff_format(p)

    try:
        with Image.open(p) as im:
            im.load()
            mode = im.mode
            if mode in ("LA", "RGBA", "PA") or (mode == "P" and "transparency" in im.info):
                if not drop_alpha:
                    raise UnsupportedImageFormatException(f"{p}: image has an alpha channel (use drop_alpha to discard it)")
                im = im.convert("L" if mode == "LA" else "RGB")
            elif mode == "P":
                im = im.convert("RGB")
            elif mode == "1":
                im = im.convert("L")
            elif mode not in ("L", "RGB"):
                raise UnsupportedImageFormatException(f"{p}: unsupported sample layout {mode!r} (only 8-bit gray or RGB)")
            pixels = np.asarray(im, dtype=np.uint8)
    except (UnidentifiedImageError, OSError, SyntaxError) as e:
        raise ImageReadException(f"unreadable file: {p}: {e}") from e

    if pixels.size == 0 or min(pixels.shape[:2]) == 0:
        raise ImageReadException(f"unreadable file: {p}: zero-dimension image")

    img = ImageBuffer.from_interleaved(pixels.astype(np.float32))
    logger.info(f"load_image: {p.name} {fmt} {img.width}x{img.height}x{img.channels}")
    return img


def encode_samples(img: ImageBuffer) -> np.ndarray:
    """Round half away from zero, clamp to [0, 255], return (height, width, channels) uint8."""
    values = img.interleaved().astype(np.float64)
    rounded = np.where(values >= 0.0, np.floor(values + 0.5), np.ceil(values - 0.5))
    return np.clip(rounded, 0.0, 255.0).astype(np.uint8)


def save_image(img: ImageBuffer, path: PathLike) -> None:
    """Write ``img`` as 8-bit PNG, PGM or PPM chosen by the file extension."""
    p = Path(path)
    ext = p.suffix.lower()
    fmt = SAVE_FORMATS.get(ext)
    if fmt is None:
        raise UnsupportedImageFormatException(f"unsupported extension {ext or '(none)'!r} for {p}; use .png, .pgm or .ppm")

    samples = encode_samples(img)
    if ext == ".pgm" and img.channels != 1:
        raise UnsupportedImageFormatException(f"{p}: PGM holds one channel, image has {img.channels}")
    if ext == ".ppm" and img.channels == 1:
        samples = np.repeat(samples, 3, axis=2)

    if samples.shape[2] == 1:
        pil = Image.fromarray(samples[:, :, 0])
    else:
        pil = Image.fromarray(samples)

    try:
        pil.save(p, format=fmt)
    except OSError as e:
        raise ImageWriteException(f"unwritable path: {p}: {e}") from e
    logger.info(f"save_image: {p.name} {img.width}x{img.height}x{samples.shape[2]}")
