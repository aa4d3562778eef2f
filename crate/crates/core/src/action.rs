//! Linearized group actions on sections as substitution maps.
//!
//! An image is `numerator / prod_j denoms[j]^powers[j]` with `denoms[0]` the
//! determinant. Denominators are never inverted: comparisons cross-multiply.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::ring::{parse_poly, Monomial, MultiPoly, ParseError, PolyRing, RingError, Scalar};

/// How the determinant enters the invariance test.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DetConvention {
    /// The determinant is a unit (projective or torus actions) and images carry
    /// explicit powers of it: `f` is invariant iff `N(f) = f * det^K`.
    Invertible,
    /// The determinant is one (special linear actions). Images are polynomial
    /// and group-homogeneous, and `f` is invariant iff `N(f) = f * det^(D/2)`
    /// with `D` the group degree of `N(f)`.
    Unimodular,
}

impl fmt::Display for DetConvention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DetConvention::Invertible => "invertible",
            DetConvention::Unimodular => "unimodular",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ActionError {
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error("polynomial is not homogeneous")]
    NotHomogeneous,
    #[error("image of `{0}` is not linear in the source variables")]
    NonLinearImage(String),
    #[error("expected {expected} images, found {found}")]
    ImageCount { expected: usize, found: usize },
    #[error("the determinant is zero")]
    ZeroDet,
    #[error("the determinant vanishes on the component")]
    DetVanishes,
    #[error("relation {relation} is not of the form L*{var} + T with L, T free of the leading variables")]
    NotLinearInLead { relation: String, var: String },
    #[error("leading variable `{0}` is not a group variable")]
    LeadNotGroup(String),
    #[error("relation {0} has no group variable to lead with")]
    NoLead(String),
    #[error("image of killed variable `{var}` reduces to {residue}, not zero")]
    KillNotReduced { var: String, residue: String },
    #[error("line {line}: {msg}")]
    Format { line: usize, msg: String },
}

/// Relation `lc * lead + tail` cutting out one hypersurface of a component.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Relation<C: Scalar> {
    pub poly: MultiPoly<C>,
    pub lead: usize,
    pub lc: MultiPoly<C>,
    pub tail: MultiPoly<C>,
}

impl<C: Scalar> Relation<C> {
    /// Splits `poly` as `lc * var + tail`; fails unless `poly` is linear in `var`.
    pub fn new(poly: MultiPoly<C>, lead: usize) -> Result<Self, ActionError> {
        let err = || ActionError::NotLinearInLead {
            relation: poly.to_string(),
            var: poly.ring().name(lead).to_string(),
        };
        if poly.degree_in(lead) != 1 {
            return Err(err());
        }
        let mut cs = poly.coefficients_in(lead);
        let lc = cs.pop().expect("degree one");
        let tail = cs.pop().expect("degree one");
        Ok(Relation { poly, lead, lc, tail })
    }

    /// `lc^K * g(-tail/lc)` with `K = deg_lead(g)`, returned with `K`.
    pub fn substitute(&self, g: &MultiPoly<C>) -> (MultiPoly<C>, u32) {
        let k = g.degree_in(self.lead);
        if k == 0 {
            return (g.clone(), 0);
        }
        let coeffs = g.coefficients_in(self.lead);
        let neg_tail = -&self.tail;
        let mut out = MultiPoly::zero(g.ring());
        let mut tail_pow = MultiPoly::one(g.ring());
        let lc_pows: Vec<MultiPoly<C>> = {
            let mut v = vec![MultiPoly::one(g.ring())];
            for _ in 0..k {
                let next = v.last().unwrap() * &self.lc;
                v.push(next);
            }
            v
        };
        for (j, c) in coeffs.iter().enumerate() {
            if !c.is_zero() {
                out = &out + &(&(c * &tail_pow) * &lc_pows[k as usize - j]);
            }
            if j < k as usize {
                tail_pow = &tail_pow * &neg_tail;
            }
        }
        (out, k)
    }
}

/// Substitutes every relation's leading variable; the result is zero iff `g`
/// lies in the ideal of the relations (for the prime components in use).
pub fn reduce_modulo<C: Scalar>(relations: &[Relation<C>], g: &MultiPoly<C>) -> (MultiPoly<C>, Vec<u32>) {
    let mut out = g.clone();
    let mut powers = Vec::with_capacity(relations.len());
    for r in relations {
        let (h, k) = r.substitute(&out);
        out = h;
        powers.push(k);
    }
    (out, powers)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Image<C: Scalar> {
    pub numerator: MultiPoly<C>,
    pub powers: Vec<u32>,
}

/// `numerator / prod_j denoms[j]^powers[j]` for the action it came from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PulledSection<C: Scalar> {
    pub numerator: MultiPoly<C>,
    pub powers: Vec<u32>,
}

impl<C: Scalar> PulledSection<C> {
    pub fn det_power(&self) -> u32 {
        self.powers[0]
    }

    /// Cross-multiplied equality.
    pub fn equals(&self, other: &Self, denoms: &[MultiPoly<C>]) -> bool {
        let lhs = mul_denoms(&self.numerator, denoms, &other.powers);
        let rhs = mul_denoms(&other.numerator, denoms, &self.powers);
        lhs == rhs
    }
}

fn mul_denoms<C: Scalar>(f: &MultiPoly<C>, denoms: &[MultiPoly<C>], powers: &[u32]) -> MultiPoly<C> {
    let mut out = f.clone();
    for (d, &p) in denoms.iter().zip(powers) {
        if p > 0 {
            out = &out * &d.pow(p);
        }
    }
    out
}

/// A group action on the sections of a line bundle, possibly restricted to one
/// component of a sliced groupoid.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ActionMap<C: Scalar> {
    source: Arc<PolyRing>,
    group: Arc<PolyRing>,
    mixed: Arc<PolyRing>,
    images: Vec<Image<C>>,
    denoms: Vec<MultiPoly<C>>,
    convention: DetConvention,
    relations: Vec<MultiPoly<C>>,
}

/// Ring on the source variables followed by the group variables.
pub fn mixed_ring(source: &PolyRing, group: &PolyRing) -> Result<Arc<PolyRing>, RingError> {
    let names = source.names().iter().chain(group.names());
    let weights = source.weights().iter().chain(group.weights()).copied();
    PolyRing::with_weights(names, weights)
}

impl<C: Scalar> ActionMap<C> {
    /// `images[i] = (numerator, det_power)` for source variable `i`; numerators
    /// and `det` are read in the mixed ring (`mixed_ring(source, group)`).
    pub fn new(
        source: &Arc<PolyRing>,
        group: &Arc<PolyRing>,
        images: Vec<(MultiPoly<C>, u32)>,
        det: MultiPoly<C>,
        convention: DetConvention,
    ) -> Result<Self, ActionError> {
        let mixed = mixed_ring(source, group)?;
        if images.len() != source.nvars() {
            return Err(ActionError::ImageCount { expected: source.nvars(), found: images.len() });
        }
        let det = det.with_ring(&mixed).or_else(|_| det.embed(&mixed))?;
        if det.is_zero() {
            return Err(ActionError::ZeroDet);
        }
        let mut imgs = Vec::with_capacity(images.len());
        for (i, (num, k)) in images.into_iter().enumerate() {
            let num = num.with_ring(&mixed).or_else(|_| num.embed(&mixed))?;
            let linear = num.terms().all(|(m, _)| m.exps()[..source.nvars()].iter().sum::<u32>() == 1);
            if !linear {
                return Err(ActionError::NonLinearImage(source.name(i).to_string()));
            }
            imgs.push(Image { numerator: num, powers: vec![k] });
        }
        Ok(ActionMap {
            source: source.clone(),
            group: group.clone(),
            mixed,
            images: imgs,
            denoms: vec![det],
            convention,
            relations: Vec::new(),
        })
    }

    pub fn source(&self) -> &Arc<PolyRing> {
        &self.source
    }

    pub fn group(&self) -> &Arc<PolyRing> {
        &self.group
    }

    pub fn mixed(&self) -> &Arc<PolyRing> {
        &self.mixed
    }

    pub fn images(&self) -> &[Image<C>] {
        &self.images
    }

    pub fn image(&self, var: &str) -> Result<&Image<C>, RingError> {
        Ok(&self.images[self.source.require(var)?])
    }

    pub fn det(&self) -> &MultiPoly<C> {
        &self.denoms[0]
    }

    pub fn denominators(&self) -> &[MultiPoly<C>] {
        &self.denoms
    }

    pub fn convention(&self) -> DetConvention {
        self.convention
    }

    /// Relations of the component this action lives on; empty when unrestricted.
    pub fn relations(&self) -> &[MultiPoly<C>] {
        &self.relations
    }

    pub fn map_coeffs<D: Scalar>(&self, f: impl Fn(&C) -> D + Copy) -> ActionMap<D> {
        ActionMap {
            source: self.source.clone(),
            group: self.group.clone(),
            mixed: self.mixed.clone(),
            images: self
                .images
                .iter()
                .map(|im| Image { numerator: im.numerator.map_coeffs(f), powers: im.powers.clone() })
                .collect(),
            denoms: self.denoms.iter().map(|d| d.map_coeffs(f)).collect(),
            convention: self.convention,
            relations: self.relations.iter().map(|r| r.map_coeffs(f)).collect(),
        }
    }

    /// Source polynomial moved into the mixed ring.
    pub fn lift(&self, f: &MultiPoly<C>) -> MultiPoly<C> {
        let n = self.mixed.nvars();
        MultiPoly::from_terms(
            &self.mixed,
            f.terms().map(|(m, c)| {
                let mut e = m.exps().to_vec();
                e.resize(n, 0);
                (self.mixed.monomial(e), c.clone())
            }),
        )
    }

    /// Pulled sections for every monomial in `basis`, built by multiplying up
    /// from lower-degree monomials already seen.
    pub(crate) fn pull_monomials(&self, basis: &[Monomial]) -> Vec<PulledSection<C>> {
        let mut memo: HashMap<Monomial, PulledSection<C>> = HashMap::new();
        basis.iter().map(|m| self.pull_memo(m, &mut memo)).collect()
    }

    fn pull_memo(&self, m: &Monomial, memo: &mut HashMap<Monomial, PulledSection<C>>) -> PulledSection<C> {
        if let Some(p) = memo.get(m) {
            return p.clone();
        }
        let Some(i) = m.exps().iter().rposition(|&e| e > 0) else {
            return PulledSection { numerator: MultiPoly::one(&self.mixed), powers: vec![0; self.denoms.len()] };
        };
        let v = self.source.var_monomial(i);
        let rest = v.quotient_of(m);
        let base = self.pull_memo(&rest, memo);
        let img = &self.images[i];
        let out = PulledSection {
            numerator: &base.numerator * &img.numerator,
            powers: base.powers.iter().zip(&img.powers).map(|(a, b)| a + b).collect(),
        };
        memo.insert(m.clone(), out.clone());
        out
    }

    /// Pulled section of a homogeneous `f`, padded to a common denominator.
    pub fn act_on_poly(&self, f: &MultiPoly<C>) -> Result<PulledSection<C>, ActionError> {
        let f = f.with_ring(&self.source).map_err(ActionError::Ring)?;
        if !f.is_zero() && f.homogeneous_degree().is_none() {
            return Err(ActionError::NotHomogeneous);
        }
        let monos: Vec<Monomial> = f.terms().map(|(m, _)| m.clone()).collect();
        let pulled = self.pull_monomials(&monos);
        let common = common_powers(&pulled, self.denoms.len());
        let mut num = MultiPoly::zero(&self.mixed);
        for ((_, c), p) in f.terms().zip(&pulled) {
            let pad: Vec<u32> = common.iter().zip(&p.powers).map(|(a, b)| a - b).collect();
            num = &num + &mul_denoms(&p.numerator, &self.denoms, &pad).scale(c);
        }
        Ok(PulledSection { numerator: num, powers: common })
    }

    /// Numerator of `sigma^* m - m` for each monomial, cleared to a common
    /// denominator so that the map is linear on the span of `basis`.
    pub fn equalizer_columns(&self, basis: &[Monomial]) -> Vec<MultiPoly<C>> {
        let pulled = self.pull_monomials(basis);
        let common = common_powers(&pulled, self.denoms.len());
        basis
            .iter()
            .zip(&pulled)
            .map(|(m, p)| {
                let pad: Vec<u32> = common.iter().zip(&p.powers).map(|(a, b)| a - b).collect();
                let lhs = mul_denoms(&p.numerator, &self.denoms, &pad);
                let lm = MultiPoly::monomial(&self.mixed, self.lift_monomial(m));
                match self.convention {
                    DetConvention::Invertible => &lhs - &mul_denoms(&lm, &self.denoms, &common),
                    DetConvention::Unimodular => {
                        let mut rest = common.clone();
                        rest[0] = 0;
                        let rhs = mul_denoms(&lm, &self.denoms, &rest);
                        match self.det_twist(&lhs, &rhs) {
                            Some(e) => &lhs - &(&rhs * &self.denoms[0].pow(e)),
                            None => lhs,
                        }
                    }
                }
            })
            .collect()
    }

    fn lift_monomial(&self, m: &Monomial) -> Monomial {
        let mut e = m.exps().to_vec();
        e.resize(self.mixed.nvars(), 0);
        self.mixed.monomial(e)
    }

    fn group_degree(&self, f: &MultiPoly<C>) -> Option<u32> {
        let s = self.source.nvars();
        let w = self.mixed.weights();
        let degs = |m: &Monomial| m.exps()[s..].iter().zip(&w[s..]).map(|(e, w)| e * w).sum::<u32>();
        let mut it = f.terms().map(|(m, _)| degs(m));
        let d = it.next()?;
        it.all(|x| x == d).then_some(d)
    }

    /// Power `e` with `group_deg(lhs) = group_deg(rhs) + e * group_deg(det)`.
    fn det_twist(&self, lhs: &MultiPoly<C>, rhs: &MultiPoly<C>) -> Option<u32> {
        let dl = self.group_degree(lhs)?;
        let dr = self.group_degree(rhs)?;
        let dd = self.group_degree(&self.denoms[0])?;
        if dl < dr {
            return None;
        }
        if dd == 0 {
            return (dl == dr).then_some(0);
        }
        ((dl - dr) % dd == 0).then_some((dl - dr) / dd)
    }

    pub fn is_invariant(&self, f: &MultiPoly<C>) -> Result<bool, ActionError> {
        self.pulls_to(f, f)
    }

    /// Whether `sigma^* f = g` on the groupoid (for homogeneous `f`, `g` of one degree).
    pub fn pulls_to(&self, f: &MultiPoly<C>, g: &MultiPoly<C>) -> Result<bool, ActionError> {
        let p = self.act_on_poly(f)?;
        let g = self.lift(&g.with_ring(&self.source)?);
        Ok(match self.convention {
            DetConvention::Invertible => p.numerator == mul_denoms(&g, &self.denoms, &p.powers),
            DetConvention::Unimodular => {
                let mut rest = p.powers.clone();
                rest[0] = 0;
                let rhs = mul_denoms(&g, &self.denoms, &rest);
                if p.numerator.is_zero() || rhs.is_zero() {
                    p.numerator.is_zero() && rhs.is_zero()
                } else {
                    match self.det_twist(&p.numerator, &rhs) {
                        Some(e) => p.numerator == &rhs * &self.denoms[0].pow(e),
                        None => false,
                    }
                }
            }
        })
    }

    /// The action on a subset of source variables whose images only involve
    /// that subset.
    pub fn sub_action(&self, keep: &[&str]) -> Result<Self, ActionError> {
        let idx = keep.iter().map(|v| self.source.require(v)).collect::<Result<Vec<_>, _>>()?;
        let source = PolyRing::with_weights(keep.iter().copied(), idx.iter().map(|&i| self.source.weights()[i]))?;
        let mixed = mixed_ring(&source, &self.group)?;
        let mut images = Vec::new();
        for &i in &idx {
            let img = &self.images[i];
            let numerator = img
                .numerator
                .restrict_to(&mixed)
                .map_err(|_| ActionError::NonLinearImage(self.source.name(i).to_string()))?;
            images.push(Image { numerator, powers: img.powers.clone() });
        }
        let denoms = self.denoms.iter().map(|d| d.restrict_to(&mixed)).collect::<Result<Vec<_>, _>>()?;
        let relations = self.relations.iter().filter_map(|r| r.restrict_to(&mixed).ok()).collect();
        Ok(ActionMap { source, group: self.group.clone(), mixed, images, denoms, convention: self.convention, relations })
    }

    /// Restriction to the component cut out by `relations` inside the slice
    /// where the `kill` variables vanish.
    ///
    /// Each relation is `(poly, lead)` in the mixed ring; its leading group
    /// variable is eliminated by substitution, so the restricted action lives
    /// on the surviving source variables and the remaining group variables.
    pub fn restrict(&self, relations: &[(MultiPoly<C>, usize)], kill: &[usize]) -> Result<Self, ActionError> {
        let s = self.source.nvars();
        let leads: Vec<usize> = relations.iter().map(|(_, v)| *v).collect();
        for &v in &leads {
            if v < s {
                return Err(ActionError::LeadNotGroup(self.mixed.name(v).to_string()));
            }
        }
        let kill_mixed: Vec<usize> = kill.to_vec();
        let mut rels = Vec::new();
        for (poly, lead) in relations {
            let poly = poly.with_ring(&self.mixed)?.kill_vars(&kill_mixed);
            let r = Relation::new(poly, *lead)?;
            if leads.iter().any(|&v| r.lc.involves(v) || r.tail.involves(v)) {
                return Err(ActionError::NotLinearInLead {
                    relation: r.poly.to_string(),
                    var: self.mixed.name(*lead).to_string(),
                });
            }
            rels.push(r);
        }
        for &k in kill {
            let n = self.images[k].numerator.kill_vars(&kill_mixed);
            let (res, _) = reduce_modulo(&rels, &n);
            if !res.is_zero() {
                return Err(ActionError::KillNotReduced { var: self.source.name(k).to_string(), residue: res.to_string() });
            }
        }
        let keep_src: Vec<usize> = (0..s).filter(|i| !kill.contains(i)).collect();
        let keep_grp: Vec<usize> = (s..self.mixed.nvars()).filter(|i| !leads.contains(i)).collect();
        let source = PolyRing::with_weights(
            keep_src.iter().map(|&i| self.source.name(i)),
            keep_src.iter().map(|&i| self.source.weights()[i]),
        )?;
        let group = PolyRing::with_weights(
            keep_grp.iter().map(|&i| self.mixed.name(i)),
            keep_grp.iter().map(|&i| self.mixed.weights()[i]),
        )?;
        let mixed = mixed_ring(&source, &group)?;
        let to_new = |f: &MultiPoly<C>| f.restrict_to(&mixed);

        let mut denoms = Vec::new();
        let mut denom_l: Vec<Vec<u32>> = Vec::new();
        for d in &self.denoms {
            let (h, ls) = reduce_modulo(&rels, &d.kill_vars(&kill_mixed));
            if h.is_zero() {
                return Err(ActionError::DetVanishes);
            }
            denoms.push(to_new(&h)?);
            denom_l.push(ls);
        }
        for r in &rels {
            denoms.push(to_new(&r.lc)?);
        }
        let nd = self.denoms.len();
        let mut images = Vec::new();
        for &i in &keep_src {
            let img = &self.images[i];
            let (h, a) = reduce_modulo(&rels, &img.numerator.kill_vars(&kill_mixed));
            let mut num = to_new(&h)?;
            let mut powers: Vec<u32> = img.powers.clone();
            powers.resize(nd + rels.len(), 0);
            for (r, a_r) in a.iter().enumerate() {
                // exponent of lc_r: sum_j p_ij * b_jr - a_ir
                let b: i64 = img.powers.iter().zip(&denom_l).map(|(&p, l)| p as i64 * l[r] as i64).sum();
                let e = b - *a_r as i64;
                if e > 0 {
                    num = &num * &denoms[nd + r].pow(e as u32);
                } else {
                    powers[nd + r] = (-e) as u32;
                }
            }
            images.push(Image { numerator: num, powers });
        }
        let mut relations_out = self.relations.clone();
        for r in &rels {
            relations_out.push(r.poly.clone());
        }
        Ok(ActionMap { source, group, mixed, images, denoms, convention: self.convention, relations: relations_out })
    }
}

fn common_powers<C: Scalar>(pulled: &[PulledSection<C>], n: usize) -> Vec<u32> {
    let mut out = vec![0u32; n];
    for p in pulled {
        for (o, q) in out.iter_mut().zip(&p.powers) {
            *o = (*o).max(*q);
        }
    }
    out
}

/// Shorthand for [`ActionMap::restrict`] taking variable names.
pub fn restrict_action<C: Scalar>(
    action: &ActionMap<C>,
    relations: &[(MultiPoly<C>, &str)],
    kill: &[&str],
) -> Result<ActionMap<C>, ActionError> {
    let rels = relations
        .iter()
        .map(|(p, v)| Ok((p.clone(), action.mixed().require(v)?)))
        .collect::<Result<Vec<_>, RingError>>()?;
    let kill = kill.iter().map(|v| action.source().require(v)).collect::<Result<Vec<_>, _>>()?;
    action.restrict(&rels, &kill)
}

impl<C: Scalar> fmt::Display for ActionMap<C> {
    /// Writes the textual action format read by [`parse_action`].
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "source: {}", self.source.names().join(", "))?;
        writeln!(f, "group: {}", self.group.names().join(", "))?;
        writeln!(f, "det: {}", self.denoms[0])?;
        writeln!(f, "convention: {}", self.convention)?;
        for (i, img) in self.images.iter().enumerate() {
            write!(f, "{} -> ({})", self.source.name(i), img.numerator)?;
            let mut den = Vec::new();
            for (j, &p) in img.powers.iter().enumerate() {
                if self.denoms[j].is_one() {
                    continue;
                }
                let name = if j == 0 { "det".to_string() } else { format!("({})", self.denoms[j]) };
                match p {
                    0 => {}
                    1 => den.push(name),
                    p => den.push(format!("{name}^{p}")),
                }
            }
            if !den.is_empty() {
                write!(f, " / {}", den.join(" / "))?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// Diagonal action of `G_m = Spec C[t, 1/t]` scaling variable `i` by `t^weights[i]`.
pub fn torus_action<C: Scalar>(source: &Arc<PolyRing>, weights: &[i32]) -> Result<ActionMap<C>, ActionError> {
    if weights.len() != source.nvars() {
        return Err(ActionError::ImageCount { expected: source.nvars(), found: weights.len() });
    }
    let group = PolyRing::new(["t"])?;
    let mixed = mixed_ring(source, &group)?;
    let t = MultiPoly::<C>::var_at(&mixed, source.nvars());
    let images = weights
        .iter()
        .enumerate()
        .map(|(i, &w)| {
            let x = MultiPoly::var_at(&mixed, i);
            if w >= 0 {
                (&x * &t.pow(w as u32), 0)
            } else {
                (x, w.unsigned_abs())
            }
        })
        .collect();
    ActionMap::new(source, &group, images, t, DetConvention::Invertible)
}

/// Reads an action from its text form.
///
/// ```text
/// source: A1, B1, C1
/// group: a, b, c, d
/// det: a*d - b*c
/// convention: invertible
/// A1 -> (A1*a^2 + B1*a*c + C1*c^2) / det
/// ```
///
/// `#` starts a comment. Images may end in `/ det` or `/ det^k`; the
/// convention line is optional and defaults to `invertible`.
pub fn parse_action<C: Scalar>(text: &str) -> Result<ActionMap<C>, ActionError> {
    let mut source: Option<Arc<PolyRing>> = None;
    let mut group: Option<Arc<PolyRing>> = None;
    let mut det_text: Option<(usize, String)> = None;
    let mut convention = DetConvention::Invertible;
    let mut image_lines: Vec<(usize, String, String)> = Vec::new();
    let fail = |line: usize, msg: String| ActionError::Format { line, msg };

    for (no, raw) in text.lines().enumerate() {
        let line_no = no + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if let Some((lhs, rhs)) = line.split_once("->") {
            image_lines.push((line_no, lhs.trim().to_string(), rhs.trim().to_string()));
            continue;
        }
        let Some((key, value)) = line.split_once(':') else {
            return Err(fail(line_no, format!("expected `key: value` or `var -> image`, found `{line}`")));
        };
        let names = || {
            value.split(',').map(str::trim).filter(|s| !s.is_empty()).map(String::from).collect::<Vec<_>>()
        };
        match key.trim() {
            "source" => source = Some(PolyRing::new(names()).map_err(|e| fail(line_no, e.to_string()))?),
            "group" => group = Some(PolyRing::new(names()).map_err(|e| fail(line_no, e.to_string()))?),
            "det" => det_text = Some((line_no, value.trim().to_string())),
            "convention" | "det-convention" => {
                convention = match value.trim() {
                    "invertible" => DetConvention::Invertible,
                    "unimodular" => DetConvention::Unimodular,
                    other => return Err(fail(line_no, format!("unknown convention `{other}`"))),
                }
            }
            other => return Err(fail(line_no, format!("unknown key `{other}`"))),
        }
    }
    let source = source.ok_or_else(|| fail(0, "missing `source:` line".into()))?;
    let group = group.ok_or_else(|| fail(0, "missing `group:` line".into()))?;
    let (det_line, det_text) = det_text.ok_or_else(|| fail(0, "missing `det:` line".into()))?;
    let mixed = mixed_ring(&source, &group)?;
    let parse_at = |line: usize, s: &str| -> Result<MultiPoly<C>, ActionError> {
        parse_poly(&mixed, s).map_err(|e: ParseError| fail(line, e.to_string()))
    };
    let det = parse_at(det_line, &det_text)?;
    let mut images: Vec<Option<(MultiPoly<C>, u32)>> = vec![None; source.nvars()];
    for (line, var, rhs) in image_lines {
        let i = source.index_of(&var).ok_or_else(|| fail(line, format!("`{var}` is not a source variable")))?;
        if images[i].is_some() {
            return Err(fail(line, format!("second image for `{var}`")));
        }
        let (expr, k) = split_det_suffix(&rhs).map_err(|m| fail(line, m))?;
        images[i] = Some((parse_at(line, expr)?, k));
    }
    let images = images
        .into_iter()
        .enumerate()
        .map(|(i, im)| im.ok_or_else(|| fail(0, format!("no image for `{}`", source.name(i)))))
        .collect::<Result<Vec<_>, _>>()?;
    ActionMap::new(&source, &group, images, det, convention)
}

fn split_det_suffix(rhs: &str) -> Result<(&str, u32), String> {
    if let Some((expr, suffix)) = rhs.rsplit_once('/') {
        let suffix = suffix.trim();
        if let Some(rest) = suffix.strip_prefix("det") {
            let rest = rest.trim();
            if rest.is_empty() {
                return Ok((expr.trim(), 1));
            }
            if let Some(k) = rest.strip_prefix('^') {
                let k = k.trim().parse::<u32>().map_err(|_| format!("bad det power `{k}`"))?;
                return Ok((expr.trim(), k));
            }
            return Err(format!("bad denominator `{suffix}`"));
        }
    }
    Ok((rhs, 0))
}
