"""Binary PGM (P5) / PPM (P6) reading and writing."""
from __future__ import annotations

import numpy as np


class NetpbmError(ValueError):
    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (byte offset {offset})")
        self.offset = offset


def _tokens(data: bytes, count: int, pos: int):
    """Read ``count`` whitespace-separated header tokens, skipping comments."""
    out = []
    n = len(data)
    while len(out) < count:
        while pos < n and data[pos] in b" \t\r\n":
            pos += 1
        if pos < n and data[pos] == ord("#"):
            while pos < n and data[pos] not in b"\r\n":
                pos += 1
            continue
        if pos >= n:
            raise NetpbmError("unexpected end of header", pos)
        start = pos
        while pos < n and data[pos] not in b" \t\r\n#":
            pos += 1
        tok = data[start:pos]
        if not tok.isdigit():
            raise NetpbmError(f"expected a decimal number, got {tok[:16]!r}", start)
        out.append(int(tok))
    return out, pos


def parse(data: bytes) -> tuple[np.ndarray, int]:
    """Decode P5/P6 bytes into an integer array ``(h, w)`` or ``(h, w, 3)`` and maxval."""
    if len(data) < 2 or data[:1] != b"P" or data[1:2] not in (b"5", b"6"):
        raise NetpbmError("not a binary PGM/PPM file (expected P5 or P6)", 0)
    channels = 1 if data[1:2] == b"5" else 3
    (width, height, maxval), pos = _tokens(data, 3, 2)
    if width < 1 or height < 1:
        raise NetpbmError("image dimensions must be positive", pos)
    if not 1 <= maxval <= 65535:
        raise NetpbmError(f"maxval {maxval} out of range", pos)
    if pos >= len(data) or data[pos] not in b" \t\r\n":
        raise NetpbmError("missing whitespace after header", pos)
    pos += 1
    depth = 1 if maxval < 256 else 2
    need = width * height * channels * depth
    payload = data[pos:pos + need]
    if len(payload) < need:
        raise NetpbmError(f"truncated payload: need {need} bytes, have {len(payload)}", pos + len(payload))
    arr = np.frombuffer(payload, dtype=">u2" if depth == 2 else np.uint8).astype(np.int64)
    if arr.max(initial=0) > maxval:
        bad = int(np.argmax(arr > maxval))
        raise NetpbmError(f"sample exceeds maxval {maxval}", pos + bad * depth)
    shape = (height, width) if channels == 1 else (height, width, 3)
    return arr.reshape(shape), maxval


def load_image(path) -> np.ndarray:
    """Grayscale intensities in [0, 1], shape ``(height, width)``."""
    with open(path, "rb") as fh:
        data = fh.read()
    arr, maxval = parse(data)
    img = arr.astype(float) / maxval
    if img.ndim == 3:
        img = 0.299 * img[..., 0] + 0.587 * img[..., 1] + 0.114 * img[..., 2]
    return img


def encode_pgm(img, maxval: int = 255) -> bytes:
    """Intensities in [0, 1] to P5 bytes."""
    img = np.asarray(img, dtype=float)
    h, w = img.shape
    q = np.clip(np.rint(img * maxval), 0, maxval).astype(np.int64)
    body = q.astype(">u2" if maxval > 255 else np.uint8).tobytes()
    return f"P5\n{w} {h}\n{maxval}\n".encode("ascii") + body


def encode_ppm(rgb) -> bytes:
    rgb = np.asarray(rgb, dtype=np.uint8)
    h, w, _ = rgb.shape
    return f"P6\n{w} {h}\n255\n".encode("ascii") + rgb.tobytes()


def write_pgm(path, img, maxval: int = 255) -> None:
    with open(path, "wb") as fh:
        fh.write(encode_pgm(img, maxval))


def write_ppm(path, rgb) -> None:
    with open(path, "wb") as fh:
        fh.write(encode_ppm(rgb))
