//! Standard bases and Milnor numbers.
//!
//! The Milnor number of an isolated singularity is the dimension of the
//! local algebra `ℚ{x}/J_g`, where `J_g` is the Jacobian ideal. In the local
//! ring only a *local* monomial order gives the right leading ideal, so the
//! reduction step is Mora's weak normal form under `negdegrevlex`; the
//! quotient dimension is then read off the staircase of leading monomials.
//! Buchberger's algorithm for the global `degrevlex` order is kept alongside,
//! both as a general tool and as an independent route for germs whose only
//! critical point is the origin.

use std::cmp::Ordering;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::poly::{Monomial, Polynomial};
use crate::rational::Rational;

/// Default cap on intermediate polynomials in a single Mora reduction.
pub const DEFAULT_REDUCTION_LIMIT: usize = 10_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MonomialOrder {
    /// Degree reverse lexicographic; a well-order.
    DegRevLex,
    /// Negative degree reverse lexicographic; `1` is the largest monomial.
    NegDegRevLex,
}

impl MonomialOrder {
    pub fn is_global(self) -> bool {
        matches!(self, MonomialOrder::DegRevLex)
    }

    pub fn cmp(self, a: &Monomial, b: &Monomial) -> Ordering {
        let by_degree = a.degree().cmp(&b.degree());
        let by_degree = match self {
            MonomialOrder::DegRevLex => by_degree,
            MonomialOrder::NegDegRevLex => by_degree.reverse(),
        };
        by_degree.then_with(|| revlex(a, b))
    }
}

/// Reverse lexicographic tie-break: the monomial with the smaller exponent
/// in the last differing variable is larger.
fn revlex(a: &Monomial, b: &Monomial) -> Ordering {
    for (x, y) in a.0.iter().zip(&b.0).rev() {
        if x != y {
            return y.cmp(x);
        }
    }
    Ordering::Equal
}

/// Terms sorted by decreasing monomial order.
#[derive(Clone, Debug)]
struct OrderedPoly {
    terms: Vec<(Monomial, Rational)>,
}

impl OrderedPoly {
    fn new(p: &Polynomial, order: MonomialOrder) -> Self {
        let mut terms: Vec<_> = p.terms().map(|(m, c)| (m.clone(), c.clone())).collect();
        terms.sort_by(|a, b| order.cmp(&b.0, &a.0));
        Self { terms }
    }

    fn to_polynomial(&self, vars: &[String]) -> Polynomial {
        Polynomial::from_terms(vars.to_vec(), self.terms.iter().cloned())
    }

    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn lead(&self) -> &(Monomial, Rational) {
        &self.terms[0]
    }

    fn lm(&self) -> &Monomial {
        &self.terms[0].0
    }

    fn ecart(&self) -> u32 {
        let top = self
            .terms
            .iter()
            .map(|(m, _)| m.degree())
            .max()
            .unwrap_or(0);
        top - self.lm().degree()
    }

    fn make_monic(&mut self) {
        if self.is_zero() {
            return;
        }
        let inv = self.terms[0].1.recip();
        if inv.is_one() {
            return;
        }
        for (_, c) in &mut self.terms {
            *c *= &inv;
        }
    }

    /// `self - c · m · g`, preserving the order (monomial orders are
    /// compatible with multiplication).
    fn sub_shifted(
        &self,
        c: &Rational,
        m: &Monomial,
        g: &OrderedPoly,
        order: MonomialOrder,
    ) -> OrderedPoly {
        let mut out = Vec::with_capacity(self.terms.len() + g.terms.len());
        let mut a = self.terms.iter().peekable();
        let mut b = g
            .terms
            .iter()
            .map(|(gm, gc)| (gm.mul(m), gc * c))
            .peekable();
        loop {
            match (a.peek(), b.peek()) {
                (None, None) => break,
                (Some(_), None) => out.push(a.next().unwrap().clone()),
                (None, Some(_)) => {
                    let (bm, bc) = b.next().unwrap();
                    out.push((bm, -bc));
                }
                (Some((am, _)), Some((bm, _))) => match order.cmp(am, bm) {
                    Ordering::Greater => out.push(a.next().unwrap().clone()),
                    Ordering::Less => {
                        let (bm, bc) = b.next().unwrap();
                        out.push((bm, -bc));
                    }
                    Ordering::Equal => {
                        let (am, ac) = a.next().unwrap();
                        let (_, bc) = b.next().unwrap();
                        let v = ac - bc;
                        if !v.is_zero() {
                            out.push((am.clone(), v));
                        }
                    }
                },
            }
        }
        OrderedPoly { terms: out }
    }

    /// Cancels the leading term of `self` against `g`, whose leading
    /// monomial must divide it.
    fn reduce_lead_by(&self, g: &OrderedPoly, order: MonomialOrder) -> OrderedPoly {
        let (hm, hc) = self.lead();
        let (gm, gc) = g.lead();
        let c = hc / gc;
        self.sub_shifted(&c, &hm.div(gm), g, order)
    }
}

fn s_polynomial(f: &OrderedPoly, g: &OrderedPoly, order: MonomialOrder) -> OrderedPoly {
    let (fm, fc) = f.lead();
    let (gm, gc) = g.lead();
    let l = fm.lcm(gm);
    let left = OrderedPoly { terms: Vec::new() }.sub_shifted(&-fc.recip(), &l.div(fm), f, order);
    left.sub_shifted(&gc.recip(), &l.div(gm), g, order)
}

/// Generators of an ideal that form a standard basis for `order`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StandardBasis {
    generators: Vec<Polynomial>,
    order: MonomialOrder,
}

impl StandardBasis {
    pub fn generators(&self) -> &[Polynomial] {
        &self.generators
    }

    pub fn order(&self) -> MonomialOrder {
        self.order
    }

    pub fn leading_monomials(&self) -> Vec<Monomial> {
        self.generators
            .iter()
            .map(|g| OrderedPoly::new(g, self.order).lm().clone())
            .collect()
    }

    /// Re-checks the S-pair criterion with the order's normal form.
    pub fn is_standard_basis(&self) -> Result<bool> {
        let polys: Vec<OrderedPoly> = self
            .generators
            .iter()
            .map(|g| OrderedPoly::new(g, self.order))
            .collect();
        for i in 0..polys.len() {
            for j in i + 1..polys.len() {
                let s = s_polynomial(&polys[i], &polys[j], self.order);
                let r = normal_form(s, &polys, self.order, DEFAULT_REDUCTION_LIMIT)?;
                if !r.is_zero() {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

fn normal_form(
    h: OrderedPoly,
    basis: &[OrderedPoly],
    order: MonomialOrder,
    limit: usize,
) -> Result<OrderedPoly> {
    match order {
        MonomialOrder::DegRevLex => Ok(full_reduce(h, basis, order)),
        MonomialOrder::NegDegRevLex => mora_reduce(h, basis, order, limit),
    }
}

/// Division algorithm for a global order; reduces every term.
fn full_reduce(mut h: OrderedPoly, basis: &[OrderedPoly], order: MonomialOrder) -> OrderedPoly {
    let mut remainder = Vec::new();
    while !h.is_zero() {
        match basis.iter().find(|g| g.lm().divides(h.lm())) {
            Some(g) => h = h.reduce_lead_by(g, order),
            None => {
                remainder.push(h.terms.remove(0));
            }
        }
    }
    OrderedPoly { terms: remainder }
}

/// Mora's weak normal form with écart-minimizing reducer selection.
fn mora_reduce(
    mut h: OrderedPoly,
    basis: &[OrderedPoly],
    order: MonomialOrder,
    limit: usize,
) -> Result<OrderedPoly> {
    let mut reducers: Vec<(OrderedPoly, u32)> =
        basis.iter().map(|g| (g.clone(), g.ecart())).collect();
    let mut steps = 0usize;
    while !h.is_zero() {
        let best = reducers
            .iter()
            .enumerate()
            .filter(|(_, (g, _))| g.lm().divides(h.lm()))
            .min_by_key(|&(i, &(_, e))| (e, i))
            .map(|(i, _)| i);
        let Some(i) = best else { break };
        steps += 1;
        if steps > limit {
            return Err(Error::ReductionLimit(limit));
        }
        let h_ecart = h.ecart();
        let next = h.reduce_lead_by(&reducers[i].0, order);
        if reducers[i].1 > h_ecart {
            let mut earlier = h;
            earlier.make_monic();
            reducers.push((earlier, h_ecart));
        }
        h = next;
    }
    Ok(h)
}

/// Weak normal form of `f` with respect to `basis` under a local order.
///
/// The result is zero iff `u·f` lies in the ideal for some unit `u` of the
/// local ring.
pub fn mora_normal_form(
    f: &Polynomial,
    basis: &[Polynomial],
    order: MonomialOrder,
    limit: usize,
) -> Result<Polynomial> {
    if order.is_global() {
        return Err(Error::Invalid(
            "Mora normal form requires a local order".into(),
        ));
    }
    let polys: Vec<OrderedPoly> = basis
        .iter()
        .filter(|g| !g.is_zero())
        .map(|g| OrderedPoly::new(g, order))
        .collect();
    let h = mora_reduce(OrderedPoly::new(f, order), &polys, order, limit)?;
    Ok(h.to_polynomial(f.vars()))
}

/// Buchberger loop shared by the global and local cases.
fn standard_basis(
    gens: &[Polynomial],
    order: MonomialOrder,
    limit: usize,
) -> Result<StandardBasis> {
    let vars = match gens.first() {
        Some(g) => g.vars().to_vec(),
        None => return Err(Error::Invalid("empty generator list".into())),
    };
    if gens.iter().any(|g| g.vars() != vars.as_slice()) {
        return Err(Error::Invalid(
            "generators over different variable lists".into(),
        ));
    }
    let mut basis: Vec<OrderedPoly> = Vec::new();
    for g in gens.iter().filter(|g| !g.is_zero()) {
        let mut p = OrderedPoly::new(g, order);
        p.make_monic();
        basis.push(p);
    }
    if basis.is_empty() {
        return Err(Error::ZeroPolynomial);
    }
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    for j in 0..basis.len() {
        for i in 0..j {
            pairs.push((i, j));
        }
    }
    while !pairs.is_empty() {
        // Normal strategy: smallest lcm degree first, ties by pair index.
        let (pos, _) = pairs
            .iter()
            .enumerate()
            .min_by_key(|(_, &(i, j))| (basis[i].lm().lcm(basis[j].lm()).degree(), i, j))
            .expect("nonempty");
        let (i, j) = pairs.swap_remove(pos);
        if basis[i].lm().is_coprime(basis[j].lm()) {
            continue;
        }
        let s = s_polynomial(&basis[i], &basis[j], order);
        let mut r = normal_form(s, &basis, order, limit)?;
        if r.is_zero() {
            continue;
        }
        r.make_monic();
        let k = basis.len();
        basis.push(r);
        for i in 0..k {
            pairs.push((i, k));
        }
    }
    let basis = minimalize(basis);
    let basis = if order.is_global() {
        tail_reduce(basis, order)
    } else {
        basis
    };
    Ok(StandardBasis {
        generators: basis.iter().map(|p| p.to_polynomial(&vars)).collect(),
        order,
    })
}

/// Drops generators whose leading monomial is divisible by another's.
fn minimalize(basis: Vec<OrderedPoly>) -> Vec<OrderedPoly> {
    let mut keep: Vec<OrderedPoly> = Vec::new();
    for (i, p) in basis.iter().enumerate() {
        let redundant = basis
            .iter()
            .enumerate()
            .any(|(j, q)| j != i && q.lm().divides(p.lm()) && (q.lm() != p.lm() || j < i));
        if !redundant {
            keep.push(p.clone());
        }
    }
    keep
}

fn tail_reduce(basis: Vec<OrderedPoly>, order: MonomialOrder) -> Vec<OrderedPoly> {
    (0..basis.len())
        .map(|i| {
            let others: Vec<OrderedPoly> = basis
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, q)| q.clone())
                .collect();
            let mut lead = basis[i].clone();
            let tail = OrderedPoly {
                terms: lead.terms.split_off(1),
            };
            let mut reduced = full_reduce(tail, &others, order);
            lead.terms.append(&mut reduced.terms);
            lead
        })
        .collect()
}

/// Reduced Gröbner basis for a global order.
pub fn buchberger(gens: &[Polynomial], order: MonomialOrder) -> Result<StandardBasis> {
    if !order.is_global() {
        return Err(Error::Invalid(
            "Buchberger's algorithm requires a global order".into(),
        ));
    }
    standard_basis(gens, order, DEFAULT_REDUCTION_LIMIT)
}

/// Standard basis for `negdegrevlex` via Mora's normal form.
pub fn local_standard_basis(gens: &[Polynomial]) -> Result<StandardBasis> {
    local_standard_basis_with_limit(gens, DEFAULT_REDUCTION_LIMIT)
}

pub fn local_standard_basis_with_limit(gens: &[Polynomial], limit: usize) -> Result<StandardBasis> {
    standard_basis(gens, MonomialOrder::NegDegRevLex, limit)
}

/// Number of monomials outside the leading ideal; `None` when infinite.
pub fn staircase_dimension(b: &StandardBasis) -> Option<u64> {
    staircase_dimension_of(&b.leading_monomials())
}

pub fn staircase_dimension_of(leading: &[Monomial]) -> Option<u64> {
    staircase_monomials(leading).map(|s| s.len() as u64)
}

/// Monomials outside the ideal generated by `leading`, or `None` when some
/// variable has no pure power among them.
pub fn staircase_monomials(leading: &[Monomial]) -> Option<Vec<Monomial>> {
    let n = leading.first()?.nvars();
    let mut bounds = Vec::with_capacity(n);
    for i in 0..n {
        let pure = leading
            .iter()
            .filter(|m| m.0.iter().enumerate().all(|(j, &e)| j == i || e == 0) && m.0[i] > 0)
            .map(|m| m.0[i])
            .min();
        match pure {
            Some(e) => bounds.push(e),
            None if leading.iter().any(Monomial::is_one) => bounds.push(0),
            None => return None,
        }
    }
    if leading.iter().any(Monomial::is_one) {
        return Some(Vec::new());
    }
    let mut out = Vec::new();
    let mut cur = vec![0u32; n];
    'outer: loop {
        let m = Monomial(cur.clone());
        if !leading.iter().any(|l| l.divides(&m)) {
            out.push(m);
        }
        for i in 0..n {
            cur[i] += 1;
            if cur[i] < bounds[i] {
                continue 'outer;
            }
            cur[i] = 0;
        }
        break;
    }
    Some(out)
}

fn check_singular_germ(germ: &Polynomial) -> Result<()> {
    if germ.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    match germ.order_at_origin() {
        Some(0) => Err(Error::NotSingularGerm),
        Some(1) => Err(Error::SmoothGerm),
        _ => Ok(()),
    }
}

/// Local standard basis of the Jacobian ideal of a singular germ.
pub fn jacobian_standard_basis(germ: &Polynomial) -> Result<StandardBasis> {
    check_singular_germ(germ)?;
    local_standard_basis(&germ.partials())
}

/// Milnor number `dim ℚ{x}/J_g`.
pub fn milnor_number(germ: &Polynomial) -> Result<u64> {
    milnor_number_with_limit(germ, DEFAULT_REDUCTION_LIMIT)
}

pub fn milnor_number_with_limit(germ: &Polynomial, limit: usize) -> Result<u64> {
    check_singular_germ(germ)?;
    let basis = local_standard_basis_with_limit(&germ.partials(), limit)?;
    staircase_dimension(&basis).ok_or(Error::NonIsolated)
}

/// Morse point test: nondegenerate Hessian at the origin.
pub fn is_node(germ: &Polynomial) -> Result<bool> {
    check_singular_germ(germ)?;
    Ok(germ.hessian_rank_at_origin()? == germ.nvars())
}
