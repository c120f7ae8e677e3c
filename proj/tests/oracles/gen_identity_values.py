"""Frozen pointwise values for the identity unit tests (run: PYTHONPATH=. python3 gen_identity_values.py)."""
import sympy as sp
from tensor_oracle import Chart, bochner_terms

th, ph = sp.symbols('theta phi', real=True)
sph = Chart([th, ph], [[1, 0], [0, sp.sin(th) ** 2]])
X = sp.sin(th) * sp.cos(ph); Y = sp.sin(th) * sp.sin(ph); Z = sp.cos(th)
J = sp.Matrix([[sp.diff(e, v) for v in (th, ph)] for e in (X, Y, Z)])
D2 = sp.Matrix([[0, 0, 1], [0, 0, 0], [1, 0, 0]])
A = sph.ginv * J.T * D2 * J + (sp.Rational(3, 10) - X * Z) * sp.eye(2)
u = X * Z + Y
lhs, terms = bochner_terms(sph, A, u)
pt = {th: sp.Rational(7, 10), ph: sp.Rational(13, 10)}
print('sphere Hess(phi)+phi g, u=xz+y at (0.7,1.3)')
print('  lhs', sp.N(lhs.subs(pt), 17))
for name, t in zip(['div', 'hess', 'grad', '-nabla', 'ric'], terms):
    print(' ', name, sp.N(t.subs(pt), 17))

x, y = sp.symbols('x y', real=True)
pl = Chart([x, y], [[1, 0], [0, 1]])
B = sp.Matrix([[6 * x, 0], [0, 0]])
u = x ** 2
lhs, terms = bochner_terms(pl, B, u)
pt = {x: sp.Rational(3, 10), y: sp.Rational(-1, 5)}
print('plane Hess(x^3), u=x^2 at (0.3,-0.2): lhs', sp.N(lhs.subs(pt), 17), [sp.N(t.subs(pt), 17) for t in terms])
