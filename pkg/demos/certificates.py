"""Almost-quasi-constant certificates for |u_n|_p and their verification.

Run:  python3 demos/certificates.py
"""
from adelic.aqp import PAdicFactorSpec, aqc_certificate, skolem_decompose, verify_certificate, zeros_in_Zp
from adelic.lrs import PolyExpSeq
from adelic.numfield import rationals
from adelic.places import place_from_selector

Q = rationals()
W2, W3 = place_from_selector(Q, "2:0"), place_from_selector(Q, "3:0")

# f(n) = |n|_2: the classes j != 0 mod 2^k carry the constant |j|_2
n_seq = PolyExpSeq.make(Q, [([Q(0), Q(1)], Q(1))])
spec = PAdicFactorSpec.create(n_seq, W2)
for depth in (1, 2, 3, 4):
    cert = aqc_certificate(spec, depth)
    print(f"|n|_2 depth {depth}: modulus {cert.modulus}, bad {cert.bad}, good fraction {cert.good_fraction}")

# f(n) = |2^n - 1|_3: the even section has a 3-adic zero at m = 0
u = PolyExpSeq.make(Q, [([Q(1)], Q(2)), ([Q(-1)], Q(1))])
spec = PAdicFactorSpec.create(u, W3)
L, sections = skolem_decompose(spec)
print(f"\n2^n - 1 at 3: L = {L}")
for b, g in enumerate(sections):
    rep = zeros_in_Zp(g, 3)
    print(f"  section {b}: Strassmann bound {rep.strassmann}, status {rep.status}, zero classes {rep.zero_classes}")
cert = aqc_certificate(spec, 3)
print(f"  depth 3 certificate: modulus {cert.modulus}, bad classes {cert.bad}")
rep = verify_certificate(cert, spec, 20)
print(f"  verified {rep.checked} samples, ok = {rep.ok}")
