"""Independent known-answer values for the Schnorr scheme (tests/test_signature.cpp)."""
import hashlib
import subprocess
import sys
from pathlib import Path

out = subprocess.run([sys.executable, str(Path(__file__).with_name("gen_schnorr_group.py"))],
                     capture_output=True, text=True, check=True).stdout
exec(out)  # defines p, q, g


def h512(*parts):
    return int.from_bytes(hashlib.sha512(b"".join(parts)).digest(), "big")


seed = b"witness-seed-1"
x = h512(b"zkpol/schnorr/keygen", seed) % (q - 1) + 1
pk = pow(g, x, p).to_bytes(256, "big")
sk = x.to_bytes(32, "big")
msg = b"abc"
k = h512(b"zkpol/schnorr/nonce", sk, msg) % (q - 1) + 1
r = pow(g, k, p)
e = int.from_bytes(hashlib.sha256(r.to_bytes(256, "big") + pk + msg).digest(), "big") % q
s = (k + x * e) % q
print("sk", sk.hex())
print("pk_head", pk[:16].hex())
print("sig", (e.to_bytes(32, "big") + s.to_bytes(32, "big")).hex())
