//! Buchberger's algorithm on fraction-free integer (or 𝔽_p) polynomials.
//!
//! Polynomials are kept primitive over ℤ (content 1, positive leading
//! coefficient) or monic over 𝔽_p. Pairs are selected by sugar degree and
//! pruned with the Gebauer–Möller installation of both Buchberger criteria.

use std::cmp::Ordering;
use std::sync::Arc;
use std::time::Instant;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{GroebnerConfig, GroebnerError};
use crate::poly::{Domain, Monomial, MonomialOrder, Polynomial, Rational, Ring};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Arith {
    Integer,
    Prime(u64),
}

impl Arith {
    pub(crate) fn of(domain: Domain) -> Arith {
        match domain {
            Domain::Rational => Arith::Integer,
            Domain::Prime(p) => Arith::Prime(p),
        }
    }

    fn reduce(&self, c: BigInt) -> BigInt {
        match self {
            Arith::Integer => c,
            Arith::Prime(p) => c.mod_floor(&BigInt::from(*p)),
        }
    }
}

/// Terms sorted by decreasing monomial order.
#[derive(Clone, Debug)]
pub(crate) struct GPoly {
    pub terms: Vec<(Monomial, BigInt)>,
    pub sugar: u32,
}

impl GPoly {
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn lm(&self) -> &Monomial {
        &self.terms[0].0
    }

    pub fn is_constant(&self) -> bool {
        !self.terms.is_empty() && self.terms[0].0.is_one()
    }
}

pub(crate) struct Engine<'a> {
    order: &'a MonomialOrder,
    arith: Arith,
    config: &'a GroebnerConfig,
}

struct Entry {
    poly: GPoly,
    mask: u64,
    active: bool,
}

#[derive(Clone, Debug)]
struct Pair {
    i: usize,
    j: usize,
    lcm: Monomial,
    sugar: u32,
}

impl<'a> Engine<'a> {
    pub fn new(order: &'a MonomialOrder, domain: Domain, config: &'a GroebnerConfig) -> Self {
        Engine {
            order,
            arith: Arith::of(domain),
            config,
        }
    }

    /// Sugar degree of a monomial.
    fn deg(&self, m: &Monomial) -> u32 {
        match self.order.weights() {
            Some(w) => m.exponents().zip(w).map(|(e, &k)| e * k).sum(),
            None => m.degree(),
        }
    }

    fn cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        self.order.compare(a, b)
    }

    /// Convert to primitive integer form; returns the factor `k` with
    /// `result = k * p`.
    pub fn import(&self, p: &Polynomial) -> (GPoly, Rational) {
        let mut terms: Vec<(Monomial, Rational)> =
            p.terms().map(|(m, c)| (m.clone(), c.clone())).collect();
        terms.sort_by(|a, b| self.cmp(&b.0, &a.0));
        let sugar = terms.iter().map(|(m, _)| self.deg(m)).max().unwrap_or(0);
        if terms.is_empty() {
            return (
                GPoly {
                    terms: vec![],
                    sugar: 0,
                },
                Rational::one(),
            );
        }
        let mut lcm = BigInt::one();
        for (_, c) in &terms {
            lcm = lcm.lcm(c.denom());
        }
        let ints: Vec<(Monomial, BigInt)> = terms
            .into_iter()
            .map(|(m, c)| {
                let v = c.numer() * (&lcm / c.denom());
                (m, self.arith.reduce(v))
            })
            .collect();
        let mut g = GPoly { terms: ints, sugar };
        let k = self.normalize(&mut g);
        (g, Rational::from_integer(lcm) * k)
    }

    /// Make primitive / monic; returns the multiplier applied.
    fn normalize(&self, g: &mut GPoly) -> Rational {
        if g.terms.is_empty() {
            return Rational::one();
        }
        match self.arith {
            Arith::Integer => {
                let mut content = BigInt::zero();
                for (_, c) in &g.terms {
                    content = content.gcd(c);
                    if content.is_one() {
                        break;
                    }
                }
                if g.terms[0].1.is_negative() {
                    content = -content;
                }
                if content.is_one() {
                    return Rational::one();
                }
                for (_, c) in g.terms.iter_mut() {
                    *c = &*c / &content;
                }
                Rational::new(BigInt::one(), content)
            }
            Arith::Prime(p) => {
                let lc = u64::try_from(&g.terms[0].1).expect("reduced coefficient");
                let inv = crate::poly::inv_mod(lc, p).expect("prime field");
                if inv == 1 {
                    return Rational::one();
                }
                let invb = BigInt::from(inv);
                for (_, c) in g.terms.iter_mut() {
                    *c = (&*c * &invb).mod_floor(&BigInt::from(p));
                }
                Rational::from_integer(invb)
            }
        }
    }

    pub fn export(&self, g: &GPoly, ring: &Arc<Ring>) -> Polynomial {
        let p = Polynomial::from_terms(
            ring,
            g.terms
                .iter()
                .map(|(m, c)| (m.clone(), Rational::from_integer(c.clone()))),
        );
        p.monic()
    }

    /// `a*f - b*q*g` for the tails `f`, `g`, where `q` is a monomial.
    fn combine(
        &self,
        f: &[(Monomial, BigInt)],
        a: &BigInt,
        g: &[(Monomial, BigInt)],
        b: &BigInt,
        q: &Monomial,
    ) -> Vec<(Monomial, BigInt)> {
        let mut out = Vec::with_capacity(f.len() + g.len());
        let mut i = 0;
        let mut j = 0;
        let a_one = a.is_one();
        let shifted: Vec<Monomial> = g.iter().map(|(m, _)| m.mul(q)).collect();
        while i < f.len() || j < g.len() {
            let ord = if i == f.len() {
                Ordering::Less
            } else if j == g.len() {
                Ordering::Greater
            } else {
                self.cmp(&f[i].0, &shifted[j])
            };
            match ord {
                Ordering::Greater => {
                    let c = if a_one { f[i].1.clone() } else { &f[i].1 * a };
                    out.push((f[i].0.clone(), self.arith.reduce(c)));
                    i += 1;
                }
                Ordering::Less => {
                    let c = self.arith.reduce(-(&g[j].1 * b));
                    if !c.is_zero() {
                        out.push((shifted[j].clone(), c));
                    }
                    j += 1;
                }
                Ordering::Equal => {
                    let left = if a_one { f[i].1.clone() } else { &f[i].1 * a };
                    let c = self.arith.reduce(left - &g[j].1 * b);
                    if !c.is_zero() {
                        out.push((f[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out
    }

    /// Fully reduce `f` by the active entries; returns the remainder and the
    /// factor `k` such that `remainder ≡ k * f` modulo the ideal.
    fn reduce_with(&self, f: GPoly, basis: &[Entry], skip: Option<usize>) -> (GPoly, Rational) {
        let mut factor = Rational::one();
        let mut sugar = f.sugar;
        let mut rem: Vec<(Monomial, BigInt)> = Vec::new();
        let mut cur = f.terms;
        let mut start = 0;
        while start < cur.len() {
            let (m, c) = (&cur[start].0, &cur[start].1);
            let mask = m.support_mask();
            let divisor = basis.iter().enumerate().find(|(idx, e)| {
                e.active && Some(*idx) != skip && e.mask & !mask == 0 && e.poly.lm().divides(m)
            });
            match divisor {
                Some((_, e)) => {
                    let g = &e.poly;
                    let q = m.div(g.lm()).expect("divisibility checked");
                    sugar = sugar.max(self.deg(&q) + g.sugar);
                    let (a, b) = match self.arith {
                        Arith::Integer => {
                            let lg = &g.terms[0].1;
                            let gg = c.gcd(lg);
                            let a = lg / &gg;
                            let b = c / &gg;
                            (a, b)
                        }
                        // basis entries are monic over 𝔽_p
                        Arith::Prime(_) => (BigInt::one(), c.clone()),
                    };
                    let next = self.combine(&cur[start + 1..], &a, &g.terms[1..], &b, &q);
                    if !a.is_one() {
                        for (_, rc) in rem.iter_mut() {
                            *rc = self.arith.reduce(&*rc * &a);
                        }
                        factor *= Rational::from_integer(a);
                    }
                    cur = next;
                    start = 0;
                }
                None => {
                    rem.push(cur[start].clone());
                    start += 1;
                }
            }
        }
        let mut out = GPoly { terms: rem, sugar };
        factor *= self.normalize(&mut out);
        (out, factor)
    }

    fn spoly(&self, f: &GPoly, g: &GPoly, lcm: &Monomial, sugar: u32) -> GPoly {
        let qf = lcm.div(f.lm()).expect("lcm");
        let qg = lcm.div(g.lm()).expect("lcm");
        let (cf, cg) = (&f.terms[0].1, &g.terms[0].1);
        let (a, b) = match self.arith {
            Arith::Integer => {
                let gg = cf.gcd(cg);
                (cg / &gg, cf / &gg)
            }
            Arith::Prime(_) => (BigInt::one(), BigInt::one()),
        };
        // a*qf*f - b*qg*g, leading terms cancel
        let ftail: Vec<(Monomial, BigInt)> = f.terms[1..]
            .iter()
            .map(|(m, c)| (m.mul(&qf), c.clone()))
            .collect();
        let terms = self.combine(&ftail, &a, &g.terms[1..], &b, &qg);
        let mut s = GPoly { terms, sugar };
        self.normalize(&mut s);
        s
    }

    /// Reduced Gröbner basis of the given polynomials (already imported).
    pub fn groebner(&self, input: Vec<GPoly>) -> Result<Vec<GPoly>, GroebnerError> {
        let started = Instant::now();
        let mut basis: Vec<Entry> = Vec::new();
        let mut pairs: Vec<Pair> = Vec::new();
        let mut input: Vec<GPoly> = input.into_iter().filter(|p| !p.is_zero()).collect();
        input.sort_by(|a, b| self.cmp(a.lm(), b.lm()));
        for f in input {
            let (r, _) = self.reduce_with(f, &basis, None);
            if r.is_zero() {
                continue;
            }
            if r.is_constant() {
                return Ok(vec![r]);
            }
            self.check_degree(&r)?;
            self.update(&mut basis, &mut pairs, r);
        }
        let mut processed = 0usize;
        while !pairs.is_empty() {
            let idx = (0..pairs.len())
                .min_by(|&x, &y| {
                    pairs[x]
                        .sugar
                        .cmp(&pairs[y].sugar)
                        .then_with(|| self.cmp(&pairs[x].lcm, &pairs[y].lcm))
                })
                .expect("nonempty");
            let pair = pairs.swap_remove(idx);
            processed += 1;
            if processed > self.config.max_pairs {
                return Err(GroebnerError::TooLarge(format!(
                    "more than {} S-pairs reduced",
                    self.config.max_pairs
                )));
            }
            if let Some(limit) = self.config.time_limit {
                if started.elapsed() > limit {
                    return Err(GroebnerError::TooLarge(format!(
                        "wall-clock limit {:?} exceeded",
                        limit
                    )));
                }
            }
            let s = self.spoly(
                &basis[pair.i].poly,
                &basis[pair.j].poly,
                &pair.lcm,
                pair.sugar,
            );
            let (r, _) = self.reduce_with(s, &basis, None);
            if r.is_zero() {
                continue;
            }
            if r.is_constant() {
                return Ok(vec![r]);
            }
            self.check_degree(&r)?;
            self.update(&mut basis, &mut pairs, r);
        }
        // active entries form a minimal basis; interreduce tails
        let active: Vec<usize> = (0..basis.len()).filter(|&i| basis[i].active).collect();
        let mut out = Vec::with_capacity(active.len());
        for &i in &active {
            let f = basis[i].poly.clone();
            let lead = f.terms[0].clone();
            let tail = GPoly {
                terms: f.terms[1..].to_vec(),
                sugar: f.sugar,
            };
            let (rt, k) = self.reduce_with(tail, &basis, Some(i));
            // lead*k_inv ... rebuild as num*lead + den*tail' with k = num/den
            let (num, den) = (k.numer().clone(), k.denom().clone());
            let mut terms = vec![(lead.0, self.arith.reduce(lead.1 * &num))];
            terms.extend(
                rt.terms
                    .into_iter()
                    .map(|(m, c)| (m, self.arith.reduce(c * &den))),
            );
            let mut g = GPoly {
                terms,
                sugar: f.sugar,
            };
            self.normalize(&mut g);
            out.push(g);
        }
        // replace in-place so later tails reduce against already reduced elements is not needed:
        // tails were reduced against the minimal basis, which is enough for uniqueness.
        out.sort_by(|a, b| self.cmp(a.lm(), b.lm()));
        Ok(out)
    }

    fn check_degree(&self, r: &GPoly) -> Result<(), GroebnerError> {
        let d = r.terms.iter().map(|(m, _)| m.degree()).max().unwrap_or(0);
        if d > self.config.max_degree {
            return Err(GroebnerError::TooLarge(format!(
                "basis element of degree {d} exceeds cap {}",
                self.config.max_degree
            )));
        }
        Ok(())
    }

    /// Gebauer–Möller update.
    fn update(&self, basis: &mut Vec<Entry>, pairs: &mut Vec<Pair>, h: GPoly) {
        let hi = basis.len();
        let hlm = h.lm().clone();
        let hsugar = h.sugar;
        let hdeg = self.deg(&hlm);
        let mut candidates: Vec<Pair> = basis
            .iter()
            .enumerate()
            .filter(|(_, e)| e.active)
            .map(|(i, e)| {
                let lcm = e.poly.lm().lcm(&hlm);
                let d = self.deg(&lcm);
                let sugar = (e.poly.sugar + d - self.deg(e.poly.lm())).max(hsugar + d - hdeg);
                Pair {
                    i,
                    j: hi,
                    lcm,
                    sugar,
                }
            })
            .collect();

        // chain criterion among the new pairs
        let mut kept: Vec<Pair> = Vec::new();
        while let Some(p) = candidates.pop() {
            let coprime = basis[p.i].poly.lm().is_coprime(&hlm);
            let dominated = candidates
                .iter()
                .chain(kept.iter())
                .any(|q| q.lcm.divides(&p.lcm));
            if coprime || !dominated {
                kept.push(p);
            }
        }
        // product criterion
        kept.retain(|p| !basis[p.i].poly.lm().is_coprime(&hlm));

        // drop old pairs made redundant by h
        pairs.retain(|p| {
            if !hlm.divides(&p.lcm) {
                return true;
            }
            let l1 = basis[p.i].poly.lm().lcm(&hlm);
            let l2 = basis[p.j].poly.lm().lcm(&hlm);
            l1 == p.lcm || l2 == p.lcm
        });
        pairs.extend(kept);

        for e in basis.iter_mut() {
            if e.active && hlm.divides(e.poly.lm()) {
                e.active = false;
            }
        }
        let mask = hlm.support_mask();
        basis.push(Entry {
            poly: h,
            mask,
            active: true,
        });
    }

    /// Remainder of `f` modulo a (reduced) basis, as an exact rational polynomial.
    pub fn normal_form(&self, f: &Polynomial, basis: &[GPoly], ring: &Arc<Ring>) -> Polynomial {
        let (g, k0) = self.import(f);
        let entries: Vec<Entry> = basis
            .iter()
            .map(|p| Entry {
                poly: p.clone(),
                mask: p.lm().support_mask(),
                active: true,
            })
            .collect();
        let (r, k) = self.reduce_with(g, &entries, None);
        // r = k * (k0 * f) mod I
        let scale = (k * k0).recip();
        let p = Polynomial::from_terms(
            ring,
            r.terms
                .into_iter()
                .map(|(m, c)| (m, Rational::from_integer(c))),
        );
        p.scale(&scale)
    }

    /// True when every S-polynomial of `basis` reduces to zero.
    pub fn satisfies_buchberger_criterion(&self, basis: &[GPoly]) -> bool {
        let entries: Vec<Entry> = basis
            .iter()
            .map(|p| Entry {
                poly: p.clone(),
                mask: p.lm().support_mask(),
                active: true,
            })
            .collect();
        for i in 0..basis.len() {
            for j in i + 1..basis.len() {
                let lcm = basis[i].lm().lcm(basis[j].lm());
                let s = self.spoly(&basis[i], &basis[j], &lcm, 0);
                let (r, _) = self.reduce_with(s, &entries, None);
                if !r.is_zero() {
                    return false;
                }
            }
        }
        true
    }
}
