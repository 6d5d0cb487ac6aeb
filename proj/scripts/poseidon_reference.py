"""Independent reference for the Poseidon instance (constants, permutation, sponge).

Used to freeze golden values in tests/test_poseidon.cpp. Mirrors docs/poseidon.md.
"""
import hashlib
import sys

P = (1 << 127) - 1


def derive(seed=b"zkpol/poseidon/v1", t=3, rf=8, rp=56, p=P):
    keep = p.bit_length() - 1
    consts = []
    j = 0
    while len(consts) < t * (rf + rp):
        b = hashlib.shake_256(seed + j.to_bytes(8, "big")).digest(16)
        v = int.from_bytes(b, "big") & ((1 << keep) - 1)
        j += 1
        if v < p:
            consts.append(v)
    mds = [[pow(i + t + jj, p - 2, p) for jj in range(t)] for i in range(t)]
    return consts, mds


def permute(state, consts, mds, t=3, rf=8, rp=56, alpha=5, p=P):
    s = list(state)
    for r in range(rf + rp):
        s = [(s[i] + consts[r * t + i]) % p for i in range(t)]
        if r < rf // 2 or r >= rf // 2 + rp:
            s = [pow(x, alpha, p) for x in s]
        else:
            s[0] = pow(s[0], alpha, p)
        s = [sum(mds[i][j] * s[j] for j in range(t)) % p for i in range(t)]
    return s


def sponge(msg, consts, mds, t=3, p=P):
    s = [len(msg) % p] + [0] * (t - 1)
    rate = t - 1
    for off in range(0, len(msg), rate):
        for j, m in enumerate(msg[off:off + rate]):
            s[1 + j] = (s[1 + j] + m) % p
        s = permute(s, consts, mds)
    return s[0]


def params_document(consts, mds):
    return {
        "schema_version": "1",
        "field_params": {"modulus": str(P), "coord_bits": "24"},
        "poseidon": {
            "seed": "zkpol/poseidon/v1", "t": "3", "alpha": "5", "r_full": "8", "r_partial": "56",
            "round_constants": [str(v) for v in consts],
            "mds": [[str(v) for v in row] for row in mds],
        },
    }


if __name__ == "__main__":
    c, m = derive()
    if sys.argv[1:] == ["--params"]:
        import json
        print(json.dumps(params_document(c, m), indent=2))
        sys.exit(0)
    print("c0", c[0])
    print("c_last", c[-1])
    print("mds00", m[0][0])
    print("perm_zero", permute([0, 0, 0], c, m))
    print("perm_123", permute([1, 2, 3], c, m))
    print("hash_1", sponge([1], c, m))
    print("hash_123", sponge([1, 2, 3], c, m))
    # fixture trail: (3,4),(6,8),(9,12) padded to n_traj=4 -> xs || ys
    xs = [3, 6, 9, 9]
    ys = [4, 8, 12, 12]
    print("hash_trail", sponge(xs + ys, c, m))
