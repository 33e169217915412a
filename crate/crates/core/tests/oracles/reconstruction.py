"""Extended-precision oracle for the N = 5 reconstruction test.

Builds the same fixture coefficients as `fixture(11, 3)` in operators.rs,
synthesizes data = Q y* on [-10, 0], solves (R + 1e-10 I) y = Q* z with
80-digit arithmetic, and prints the on-window max error relative to max|data|.
"""
import mpmath as mp

mp.mp.dps = 80
MASK = (1 << 64) - 1


def fixture(length, salt):
    state = 0x9E3779B97F4A7C15 ^ salt
    out = []
    for _ in range(length):
        state ^= (state << 13) & MASK
        state ^= state >> 7
        state ^= (state << 17) & MASK
        out.append(mp.mpf(state >> 11) / mp.mpf(1 << 52) - 1)
    return out


def main(n=5, ridge=mp.mpf("1e-10")):
    omega = mp.pi / 4
    modes = range(-n, n + 1)
    times = range(-2 * n, 1)
    atom = lambda k, t: (omega / mp.pi) * mp.sinc(k * mp.pi + omega * t)
    truth = fixture(2 * n + 1, 3)
    data = [sum(truth[k + n] * atom(k, t) for k in modes) for t in times]
    gram = mp.matrix(2 * n + 1, 2 * n + 1)
    for i, k in enumerate(modes):
        for j, m in enumerate(modes):
            gram[i, j] = sum(atom(k, t) * atom(m, t) for t in times)
        gram[i, i] += ridge
    rhs = mp.matrix([sum(atom(k, t) * z for t, z in zip(times, data)) for k in modes])
    y = mp.lu_solve(gram, rhs)
    err = max(abs(sum(y[k + n] * atom(k, t) for k in modes) - z) for t, z in zip(times, data))
    peak = max(abs(z) for z in data)
    print(f"max error {mp.nstr(err, 15)}  relative {mp.nstr(err / peak, 15)}")


if __name__ == "__main__":
    main()
