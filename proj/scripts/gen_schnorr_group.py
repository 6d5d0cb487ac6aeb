"""Derive the fixed Schnorr group used by the default signature scheme.

q: next prime above SHAKE256("zkpol/schnorr/q") truncated to 256 bits (top bit set).
p = k*q + 1 for the smallest even k > 2^2047 / q making p prime (so p has 2048 bits).
g: h^((p-1)/q) mod p for the smallest h >= 2 giving g != 1.
"""
import hashlib
import gmpy2

seed = hashlib.shake_256(b"zkpol/schnorr/q").digest(32)
q = int.from_bytes(seed, "big") | (1 << 255)
q = int(gmpy2.next_prime(q))
k = (1 << 2047) // q + 1
if k % 2:
    k += 1
while not gmpy2.is_prime(k * q + 1, 64):
    k += 2
p = k * q + 1
assert p.bit_length() == 2048
h = 2
while pow(h, (p - 1) // q, p) == 1:
    h += 1
g = pow(h, (p - 1) // q, p)
print("p =", hex(p))
print("q =", hex(q))
print("g =", hex(g))
