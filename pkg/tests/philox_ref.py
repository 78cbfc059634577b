"""Pure-Python Philox4x64-10 (Salmon et al. constants), for known-answer checks."""
M64 = (1 << 64) - 1
MUL0, MUL1 = 0xD2E7470EE14C6C93, 0xCA5A826395121157
WEYL0, WEYL1 = 0x9E3779B97F4A7C15, 0xBB67AE8584CAA73B


def philox4x64(counter, key, rounds=10):
    c0, c1, c2, c3 = counter
    k0, k1 = key
    for _ in range(rounds):
        p0 = MUL0 * c0
        p1 = MUL1 * c2
        c0, c1, c2, c3 = (p1 >> 64) ^ c1 ^ k0, p1 & M64, (p0 >> 64) ^ c3 ^ k1, p0 & M64
        k0 = (k0 + WEYL0) & M64
        k1 = (k1 + WEYL1) & M64
    return c0, c1, c2, c3
