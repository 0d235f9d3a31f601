# Independent SP59 oracle: chi-square formulation, mpmath high precision.
import mpmath as mp
mp.mp.dps = 40
def theta(n,k):
    target = mp.mpf(2)**(-k)
    a = mp.mpf(n-1)/2
    f = lambda t: mp.log(mp.betainc(a, mp.mpf(1)/2, 0, mp.sin(t)**2, regularized=True)/2) - mp.log(target)
    lo, hi = mp.mpf('1e-12'), mp.pi/2
    for _ in range(200):
        mid = (lo+hi)/2
        if f(mid) < 0: lo = mid
        else: hi = mid
    return (lo+hi)/2
def q(n,k,ebn0_db):
    R = mp.mpf(k)/n
    A = mp.sqrt(2*R*mp.power(10, mp.mpf(ebn0_db)/10))
    th = theta(n,k)
    mu = A*mp.sqrt(n)
    t2 = mp.tan(th)**2
    a = mp.mpf(n-1)/2
    pneg = mp.ncdf(-mu)
    g = lambda y: mp.npdf(y, mu, 1)*mp.gammainc(a, y*y*t2/2, mp.inf, regularized=True)
    pts = [0, mu-12, mu-6, mu-3, mu, mu+3, mu+6, mu+12]
    pts = sorted(set([p for p in pts if p >= 0]))
    return pneg + mp.quad(g, pts)
if __name__ == '__main__':
    for (n,k) in [(128,64),(16,8),(63,56),(8,4)]:
        print(n,k,'theta',mp.nstr(theta(n,k),17))
        for eb in [0.0,1.0,2.0,3.0,4.0,5.0]:
            print(n,k,eb, mp.nstr(q(n,k,eb),17))
