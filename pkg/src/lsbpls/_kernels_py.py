"""Pure-Python versions of the hot loops.

Semantics must match ``_kernels.pyx`` exactly; the test suite runs both
against the same inputs.
"""


def set_parity(value, bit):
    if (value & 1) == bit:
        return value
    # decrement unless that would underflow
    return 1 if value == 0 else value - 1


def embed_bits(flat, pls, payload):
    """Write each payload byte, MSB first, into the parities of 8 channels.

    ``flat`` is the writable ``H*W*3`` channel buffer, ``pls`` the pixel
    indices (three per byte) and ``payload`` the bytes to hide.  Channel
    order inside a triad is r,g,b, r,g,b, r,g; the last blue is skipped.
    """
    payload = bytes(payload)
    if len(pls) < 3 * len(payload):
        raise ValueError("pixel sequence shorter than 3 per payload byte")
    buf = memoryview(flat).cast("B")
    idx = [int(p) for p in pls]
    for k, byte in enumerate(payload):
        base = 3 * k
        bitpos = 7
        for p in idx[base:base + 3]:
            off = 3 * p
            for c in range(3):
                if bitpos < 0:
                    break
                bit = (byte >> bitpos) & 1
                v = buf[off + c]
                if (v & 1) != bit:
                    buf[off + c] = 1 if v == 0 else v - 1
                bitpos -= 1


def extract_bits(flat, pls):
    buf = memoryview(flat).cast("B")
    idx = [int(p) for p in pls]
    out = bytearray(len(idx) // 3)
    for k in range(len(out)):
        byte = 0
        nbits = 0
        for p in idx[3 * k:3 * k + 3]:
            off = 3 * p
            for c in range(3):
                if nbits == 8:
                    break
                byte = (byte << 1) | (buf[off + c] & 1)
                nbits += 1
        out[k] = byte
    return bytes(out)


def partial_shuffle(n, choices):
    """Run ``len(choices)`` steps of a Fisher-Yates shuffle over ``range(n)``.

    Step ``i`` swaps slot ``n-1-i`` with slot ``choices[i]`` (which must lie
    in ``[0, n-i)``) and emits the value that lands in slot ``n-1-i``.
    Untouched slots are implicit, so memory is O(len(choices)).
    """
    if len(choices) > n:
        raise ValueError("more steps than elements")
    moved = {}
    out = []
    for i, r in enumerate(choices):
        r = int(r)
        last = n - 1 - i
        if not 0 <= r <= last:
            raise ValueError(f"choice {r} at step {i} outside [0, {last}]")
        picked = moved.get(r, r)
        moved[r] = moved.get(last, last)
        out.append(picked)
    return out
