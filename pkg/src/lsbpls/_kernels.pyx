# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot loops; see ``_kernels_py`` for the reference semantics."""
import numpy as np

from libc.stdint cimport int64_t, uint8_t


def set_parity(int value, int bit):
    if (value & 1) == bit:
        return value
    return 1 if value == 0 else value - 1


def embed_bits(uint8_t[::1] flat, const int64_t[::1] pls, const uint8_t[::1] payload):
    cdef Py_ssize_t k, t, c, off, nbytes = payload.shape[0]
    cdef int bitpos, bit
    cdef uint8_t v, byte
    if pls.shape[0] < 3 * nbytes:
        raise ValueError("pixel sequence shorter than 3 per payload byte")
    for k in range(nbytes):
        byte = payload[k]
        bitpos = 7
        for t in range(3):
            off = 3 * pls[3 * k + t]
            for c in range(3):
                if bitpos < 0:
                    break
                bit = (byte >> bitpos) & 1
                v = flat[off + c]
                if (v & 1) != bit:
                    flat[off + c] = 1 if v == 0 else v - 1
                bitpos -= 1


def extract_bits(const uint8_t[::1] flat, const int64_t[::1] pls):
    cdef Py_ssize_t k, t, c, off, nchars = pls.shape[0] // 3
    cdef int nbits
    cdef unsigned int byte
    out = bytearray(nchars)
    cdef unsigned char[::1] o = out
    for k in range(nchars):
        byte = 0
        nbits = 0
        for t in range(3):
            off = 3 * pls[3 * k + t]
            for c in range(3):
                if nbits == 8:
                    break
                byte = (byte << 1) | (flat[off + c] & 1)
                nbits += 1
        o[k] = <unsigned char>byte
    return bytes(out)


def partial_shuffle(int64_t n, const int64_t[::1] choices):
    cdef Py_ssize_t i, m = choices.shape[0]
    cdef int64_t r, last, tmp
    if m > n:
        raise ValueError("more steps than elements")
    arr_np = np.arange(n, dtype=np.int64)
    out_np = np.empty(m, dtype=np.int64)
    cdef int64_t[::1] arr = arr_np
    cdef int64_t[::1] out = out_np
    for i in range(m):
        r = choices[i]
        last = n - 1 - i
        if r < 0 or r > last:
            raise ValueError(f"choice {r} at step {i} outside [0, {last}]")
        tmp = arr[last]
        arr[last] = arr[r]
        arr[r] = tmp
        out[i] = arr[last]
    return out_np
