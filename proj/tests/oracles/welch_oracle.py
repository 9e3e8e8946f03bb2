"""High-precision Welch t-test values frozen into the evalkit tests."""
from mpmath import mp, mpf, sqrt, betainc

mp.dps = 50


def welch_summary(ma, sa, na, mb, sb, nb):
    va = mpf(sa) ** 2 / na
    vb = mpf(sb) ** 2 / nb
    se2 = va + vb
    t = (mpf(ma) - mpf(mb)) / sqrt(se2)
    df = se2 ** 2 / (va ** 2 / (na - 1) + vb ** 2 / (nb - 1))
    p = betainc(df / 2, mpf(1) / 2, 0, df / (df + t * t), regularized=True)
    return t, df, p


def sample_stats(xs):
    n = len(xs)
    m = sum(mpf(x) for x in xs) / n
    s = sqrt(sum((mpf(x) - m) ** 2 for x in xs) / (n - 1))
    return m, s, n


if __name__ == "__main__":
    t, df, p = welch_summary("19.8", "5.2", 21, "23.4", "4.9", 19)
    print("summary fixture t=%s df=%s p=%s" % (mp.nstr(t, 20), mp.nstr(df, 20), mp.nstr(p, 20)))
    a = [0.25, 1.5, 0.75, 1.0, 2.0, 0.5, 1.25]
    b = [1.75, 2.5, 1.0, 3.0, 2.25, 1.5]
    t, df, p = welch_summary(*sample_stats(a), *sample_stats(b))
    print("sample fixture t=%s df=%s p=%s" % (mp.nstr(t, 20), mp.nstr(df, 20), mp.nstr(p, 20)))
