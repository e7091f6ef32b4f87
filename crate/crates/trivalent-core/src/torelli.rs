//! The degree-one cocycle on `U`, its commutator expansion, and labeled
//! chord-diagram combinatorics.
//!
//! Three strands of the theory meet here.
//!
//! **The cocycle.** With `H` the genus-`g` symplectic space and
//! `U = Λ³H / H`, the bilinear map
//!
//! ```text
//!     C(α1, α2) = −c_theta_u(α1, α2) · Θ
//! ```
//!
//! pairs two `U`-elements into the one-dimensional degree-one graph space
//! spanned by the theta graph ([`CocycleC1`], [`c1_eval`]). Bilinearity makes
//! it a 2-cocycle of the abelian group `U` ([`c1_is_cocycle`]), and the two
//! Lagrangian orders give cocycles related by `C⁺(a, b) = −C⁻(b, a)`, hence
//! equal antisymmetrizations and equal cohomology classes. The companion
//! functional [`WeightSystemW`] is normalized by `W(Θ) = −2`, so
//! `W ∘ C = 2 · c_theta_u`.
//!
//! **The commutator expansion.** A formal bracket tree with `U`-element
//! leaves ([`FormalCommutator`]) expands through the signed sum
//!
//! ```text
//!     −Σ_a C([^a(1) y_1, [^a(2) y_2, … ]]),   [⁰x, y] = x⊗y,  [¹x, y] = −y⊗x
//! ```
//!
//! over all assignments `a : {1..2m−1} → {0,1}` ([`d_expand`]); general trees
//! are first rewritten into right-nested combs by the Jacobi identity. For
//! `m = 1` this is `−(C(y_1, y_2) − C(y_2, y_1))`, and inversion acts at the
//! graded level by negating a leaf ([`d_symmetry_check`]).
//!
//! **The labeling combinatorics.** A degree-`n` chord diagram has `3n` edges
//! once its `2n` boundary arcs are included: chords are labeled `b`, arcs
//! alternate `a` and `c` around the circle, and every vertex (endpoint) meets
//! one edge of each label ([`label_edges`]). An ordering of the edges makes a
//! vertex *proper* when its three edges appear in label order `a, b, c`;
//! improper vertices split into univalent ones ([`properness`]). A bracket
//! word in the edge symbols certifies a proper ordering when its expansion
//! under the leading-term functional `L` (with `L(leaf) = z`, `L([u,v]) =
//! −(L(u)L(v) − L(v)L(u))`) contains exactly one all-vertices-proper monomial
//! with coefficient `±1` ([`proper_commutator_check`]); the greedy merge
//! procedure of [`build_proper_commutator`] constructs such a word.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::chordspace::LinearChordDiagram;
use crate::exact::Rational;
use crate::graphspace::{canonicalize, CanonicalGraph, GraphVector, OrientedTrivalentGraph};
use crate::symplectic::{
    c_theta_u, c_theta_u_form, cup_class, wedge_triples, LagrangianOrder, SymplecticSpace,
    Wedge3Element,
};
use crate::{Error, Result};

// ---------------------------------------------------------------------------
// The theta class and the weight functional
// ---------------------------------------------------------------------------

/// The canonical form of the theta graph together with the sign its standard
/// vertex orientation picks up under canonicalization.
fn canonical_theta() -> (CanonicalGraph, i32) {
    canonicalize(&OrientedTrivalentGraph::theta())
}

/// The class of the theta graph `Θ` (with its standard orientation) as a
/// vector in the degree-one graph space, which it spans.
pub fn theta_w_vector() -> GraphVector {
    GraphVector::from_oriented(&OrientedTrivalentGraph::theta())
}

/// The linear functional on the one-dimensional degree-one graph space
/// normalized by `W(Θ) = −2`.
#[derive(Clone, Copy, Debug, Default)]
pub struct WeightSystemW;

impl WeightSystemW {
    /// Creates the functional.
    pub fn new() -> Self {
        WeightSystemW
    }

    /// Evaluates on a degree-one graph vector. Only multiples of the theta
    /// class are accepted: any other surviving class is an error.
    pub fn eval(&self, v: &GraphVector) -> Result<Rational> {
        let (theta, theta_sign) = canonical_theta();
        let mut total = Rational::zero();
        for (graph, coeff) in v.terms() {
            if *graph == theta {
                // theta_w_vector carries coefficient theta_sign on the
                // canonical class, and W of that vector must be −2.
                let unit = Rational::from(i64::from(theta_sign) * -2);
                total += &(coeff * &unit);
            } else {
                return Err(Error::invalid(format!(
                    "weight functional is defined on the degree-one space spanned \
                     by the theta class; found a degree-{} class",
                    graph.degree()
                )));
            }
        }
        Ok(total)
    }
}

// ---------------------------------------------------------------------------
// The degree-one cocycle
// ---------------------------------------------------------------------------

/// The degree-one bilinear cocycle pairing two `U`-elements (represented by
/// lifts in `Λ³H`) into the degree-one graph space:
/// `C(α1, α2) = −c_theta_u(α1, α2) · Θ`.
///
/// The `swapped` flag exchanges the roles of the two Lagrangian summands,
/// producing the companion cocycle with `C⁺(a, b) = −C⁻(b, a)`.
#[derive(Clone, Debug)]
pub struct CocycleC1 {
    space: SymplecticSpace,
    swapped: bool,
}

impl CocycleC1 {
    /// Creates the cocycle at the given genus; `swapped` selects the reversed
    /// Lagrangian order.
    pub fn new(genus: usize, swapped: bool) -> Result<Self> {
        Ok(CocycleC1 { space: SymplecticSpace::new(genus)?, swapped })
    }

    /// The genus of the underlying symplectic space.
    pub fn genus(&self) -> usize {
        self.space.genus()
    }

    /// Whether the Lagrangian order is reversed.
    pub fn swapped(&self) -> bool {
        self.swapped
    }

    /// The Lagrangian order this flag selects.
    pub fn order(&self) -> LagrangianOrder {
        if self.swapped {
            LagrangianOrder::MinusPlus
        } else {
            LagrangianOrder::PlusMinus
        }
    }

    /// The scalar coefficient of `Θ` in the value: `−c_theta_u(a, b)`.
    pub fn coefficient(&self, a: &Wedge3Element, b: &Wedge3Element) -> Result<Rational> {
        if a.genus() != self.genus() || b.genus() != self.genus() {
            return Err(Error::invalid("cocycle arguments must match the cocycle genus"));
        }
        Ok(-c_theta_u(a, b, self.order())?)
    }

    /// Evaluates the cocycle, producing a multiple of the theta class.
    pub fn eval(&self, a: &Wedge3Element, b: &Wedge3Element) -> Result<GraphVector> {
        let c = self.coefficient(a, b)?;
        let mut v = theta_w_vector();
        v.scale(&c);
        Ok(v)
    }
}

/// Evaluates the degree-one cocycle on two `U`-element lifts.
pub fn c1_eval(c: &CocycleC1, a: &Wedge3Element, b: &Wedge3Element) -> Result<GraphVector> {
    c.eval(a, b)
}

/// Outcome of the 2-cocycle verification of [`c1_is_cocycle`].
#[derive(Clone, Debug)]
pub struct CocycleReport {
    /// Number of random triples sampled.
    pub samples: usize,
    /// The alternating coboundary vanished on every sampled triple.
    pub cocycle_identity_holds: bool,
    /// A deliberately non-bilinear perturbation produced a nonzero
    /// coboundary somewhere (the check has teeth).
    pub perturbation_detected: bool,
    /// `C⁺(a, b) = −C⁻(b, a)` held on every sampled pair.
    pub sign_law_holds: bool,
}

impl CocycleReport {
    /// Whether every check passed.
    pub fn ok(&self) -> bool {
        self.cocycle_identity_holds && self.perturbation_detected && self.sign_law_holds
    }
}

/// A random `Λ³H` element with small integer coefficients.
fn random_wedge(genus: usize, rng: &mut ChaCha8Rng) -> Wedge3Element {
    let mut w = Wedge3Element::zero(genus);
    for key in wedge_triples(genus) {
        let c = rng.random_range(-3i64..=3);
        if c != 0 {
            w.add_wedge(key, Rational::from(c));
        }
    }
    w
}

/// Verifies on random `U`-elements that the cocycle satisfies the 2-cocycle
/// identity of the abelian group `U` (additive bar coboundary)
///
/// ```text
///     δC[α|β|γ] = C(β, γ) − C(α+β, γ) + C(α, β+γ) − C(α, β) = 0,
/// ```
///
/// that a non-bilinear perturbation of it fails the same identity, and that
/// the swapped-order cocycle obeys the sign law `C⁺(a, b) = −C⁻(b, a)`.
pub fn c1_is_cocycle(c: &CocycleC1, samples: usize) -> Result<CocycleReport> {
    let genus = c.genus();
    let mut rng = ChaCha8Rng::seed_from_u64(40);
    let other = CocycleC1::new(genus, !c.swapped())?;
    let first_triple = wedge_triples(genus)[0];

    // Perturbation q(a, b) = (a₀)²(b₀)², quadratic in each slot.
    let q = |a: &Wedge3Element, b: &Wedge3Element| -> Rational {
        let fa = a.get(&first_triple);
        let fb = b.get(&first_triple);
        &(&fa * &fa) * &(&fb * &fb)
    };
    let perturbed = |a: &Wedge3Element, b: &Wedge3Element| -> Result<GraphVector> {
        let mut v = c.eval(a, b)?;
        let mut extra = theta_w_vector();
        extra.scale(&q(a, b));
        v.add(&extra);
        Ok(v)
    };
    let coboundary = |f: &dyn Fn(&Wedge3Element, &Wedge3Element) -> Result<GraphVector>,
                      a: &Wedge3Element,
                      b: &Wedge3Element,
                      g: &Wedge3Element|
     -> Result<GraphVector> {
        let mut ab = a.clone();
        ab.add_scaled(b, &Rational::one());
        let mut bg = b.clone();
        bg.add_scaled(g, &Rational::one());
        let mut total = f(b, g)?;
        let mut t = f(&ab, g)?;
        t.scale(&-Rational::one());
        total.add(&t);
        total.add(&f(a, &bg)?);
        let mut t = f(a, b)?;
        t.scale(&-Rational::one());
        total.add(&t);
        Ok(total)
    };

    let eval_c = |a: &Wedge3Element, b: &Wedge3Element| c.eval(a, b);
    let mut cocycle_identity_holds = true;
    let mut perturbation_detected = false;
    let mut sign_law_holds = true;
    for _ in 0..samples {
        let a = random_wedge(genus, &mut rng);
        let b = random_wedge(genus, &mut rng);
        let g = random_wedge(genus, &mut rng);
        if !coboundary(&eval_c, &a, &b, &g)?.is_zero() {
            cocycle_identity_holds = false;
        }
        if !coboundary(&perturbed, &a, &b, &g)?.is_zero() {
            perturbation_detected = true;
        }
        let mut swapped = other.eval(&b, &a)?;
        swapped.scale(&-Rational::one());
        if c.eval(&a, &b)? != swapped {
            sign_law_holds = false;
        }
    }

    // A handcrafted witness guarantees the perturbation is detectable even if
    // the random samples happen to miss it: with f(v) = (v₀)², the alternating
    // sum evaluates to 2·α₀β₀γ₀(α₀ − γ₀) ≠ 0 for α₀ = β₀ = 1, γ₀ = 2.
    let [i, j, k] = first_triple;
    let e0 = Wedge3Element::wedge(genus, i, j, k)?;
    let mut e0_twice = e0.clone();
    e0_twice.scale(&Rational::from(2));
    if !coboundary(&perturbed, &e0, &e0, &e0_twice)?.is_zero() {
        perturbation_detected = true;
    }

    Ok(CocycleReport { samples, cocycle_identity_holds, perturbation_detected, sign_law_holds })
}

// ---------------------------------------------------------------------------
// Formal commutators and the expansion map
// ---------------------------------------------------------------------------

/// A binary bracket tree over leaves of type `L`.
///
/// The same shape serves two roles: with `Λ³H` leaves it feeds the cocycle
/// expansion [`d_expand`]; with [`EdgeSymbol`] leaves it feeds the proper
/// ordering certificate [`proper_commutator_check`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FormalCommutator<L> {
    /// A leaf carrying its payload.
    Leaf(L),
    /// A bracket `[u, v]` of two subtrees.
    Bracket(Box<FormalCommutator<L>>, Box<FormalCommutator<L>>),
}

impl<L> FormalCommutator<L> {
    /// A leaf.
    pub fn leaf(l: L) -> Self {
        FormalCommutator::Leaf(l)
    }

    /// A bracket of two subtrees.
    pub fn bracket(u: Self, v: Self) -> Self {
        FormalCommutator::Bracket(Box::new(u), Box::new(v))
    }

    /// Number of leaves.
    pub fn leaf_count(&self) -> usize {
        match self {
            FormalCommutator::Leaf(_) => 1,
            FormalCommutator::Bracket(u, v) => u.leaf_count() + v.leaf_count(),
        }
    }

    /// The leaves in left-to-right order.
    pub fn leaves(&self) -> Vec<&L> {
        let mut out = Vec::new();
        self.collect_leaves(&mut out);
        out
    }

    fn collect_leaves<'a>(&'a self, out: &mut Vec<&'a L>) {
        match self {
            FormalCommutator::Leaf(l) => out.push(l),
            FormalCommutator::Bracket(u, v) => {
                u.collect_leaves(out);
                v.collect_leaves(out);
            }
        }
    }

    /// Applies a fallible transformation to every leaf, preserving shape.
    pub fn try_map<M>(&self, f: &mut impl FnMut(&L) -> Result<M>) -> Result<FormalCommutator<M>> {
        Ok(match self {
            FormalCommutator::Leaf(l) => FormalCommutator::Leaf(f(l)?),
            FormalCommutator::Bracket(u, v) => {
                FormalCommutator::Bracket(Box::new(u.try_map(f)?), Box::new(v.try_map(f)?))
            }
        })
    }
}

impl<L: Clone> FormalCommutator<L> {
    /// Rewrites the tree, by repeated Jacobi identities
    /// `[[a, b], c] = [a, [b, c]] − [b, [a, c]]`, into a signed sum of
    /// right-nested combs `[l_1, [l_2, [… [l_{k−1}, l_k]]]]`, each returned
    /// as its leaf sequence with a sign.
    pub fn comb_expansion(&self) -> Vec<(Vec<L>, i64)> {
        match self {
            FormalCommutator::Leaf(l) => vec![(vec![l.clone()], 1)],
            FormalCommutator::Bracket(u, v) => {
                let mut out = Vec::new();
                for (cu, su) in u.comb_expansion() {
                    for (cv, sv) in v.comb_expansion() {
                        for (m, s) in merge_combs(&cu, &cv) {
                            out.push((m, su * sv * s));
                        }
                    }
                }
                out
            }
        }
    }
}

/// Expands the bracket of two combs `[U, V]` into a signed sum of combs:
/// `[[u_1, U'], V] = [u_1, [U', V]] − [U', [u_1, V]]`, with the base case
/// `[u_1, V]` prepending the single leaf.
fn merge_combs<L: Clone>(u: &[L], v: &[L]) -> Vec<(Vec<L>, i64)> {
    if u.len() == 1 {
        let mut m = Vec::with_capacity(1 + v.len());
        m.push(u[0].clone());
        m.extend_from_slice(v);
        return vec![(m, 1)];
    }
    let head = &u[..1];
    let tail = &u[1..];
    let mut out = Vec::new();
    for (m, s) in merge_combs(tail, v) {
        let mut with_head = Vec::with_capacity(1 + m.len());
        with_head.push(u[0].clone());
        with_head.extend(m);
        out.push((with_head, s));
    }
    let mut head_v = Vec::with_capacity(1 + v.len());
    head_v.push(u[0].clone());
    head_v.extend_from_slice(v);
    for (m, s) in merge_combs(tail, &head_v) {
        out.push((m, -s));
    }
    let _ = head;
    out
}

impl<L: fmt::Display> fmt::Display for FormalCommutator<L> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FormalCommutator::Leaf(l) => write!(f, "{l}"),
            FormalCommutator::Bracket(u, v) => write!(f, "[{u},{v}]"),
        }
    }
}

/// Parses a bracket expression like `"[x1,[x2,x3]]"`; leaves are alphanumeric
/// symbols (underscores allowed).
pub fn parse_commutator(s: &str) -> Result<FormalCommutator<String>> {
    let chars: Vec<char> = s.chars().collect();
    let mut pos = 0usize;
    let tree = parse_tree(&chars, &mut pos)?;
    skip_ws(&chars, &mut pos);
    if pos != chars.len() {
        return Err(Error::invalid(format!(
            "trailing input after commutator at byte {pos}"
        )));
    }
    Ok(tree)
}

fn skip_ws(chars: &[char], pos: &mut usize) {
    while *pos < chars.len() && chars[*pos].is_whitespace() {
        *pos += 1;
    }
}

fn parse_tree(chars: &[char], pos: &mut usize) -> Result<FormalCommutator<String>> {
    skip_ws(chars, pos);
    match chars.get(*pos) {
        Some('[') => {
            *pos += 1;
            let u = parse_tree(chars, pos)?;
            skip_ws(chars, pos);
            if chars.get(*pos) != Some(&',') {
                return Err(Error::invalid("expected ',' between bracket entries"));
            }
            *pos += 1;
            let v = parse_tree(chars, pos)?;
            skip_ws(chars, pos);
            if chars.get(*pos) != Some(&']') {
                return Err(Error::invalid("expected ']' closing a bracket"));
            }
            *pos += 1;
            Ok(FormalCommutator::bracket(u, v))
        }
        Some(c) if c.is_ascii_alphanumeric() || *c == '_' => {
            let start = *pos;
            while *pos < chars.len()
                && (chars[*pos].is_ascii_alphanumeric() || chars[*pos] == '_')
            {
                *pos += 1;
            }
            Ok(FormalCommutator::leaf(chars[start..*pos].iter().collect()))
        }
        other => Err(Error::invalid(format!(
            "expected '[' or a leaf symbol, found {other:?}"
        ))),
    }
}

/// A multilinear functional on tuples of `Λ³H` lifts with graph-space values,
/// the coefficient interface consumed by [`d_expand`]. The degree-one cocycle
/// implements it with arity 2.
pub trait CommutatorCocycle {
    /// Number of arguments.
    fn arity(&self) -> usize;

    /// Evaluates on a full tuple.
    fn eval_multi(&self, args: &[Wedge3Element]) -> Result<GraphVector>;
}

impl CommutatorCocycle for CocycleC1 {
    fn arity(&self) -> usize {
        2
    }

    fn eval_multi(&self, args: &[Wedge3Element]) -> Result<GraphVector> {
        if args.len() != 2 {
            return Err(Error::invalid("degree-one cocycle takes exactly two arguments"));
        }
        self.eval(&args[0], &args[1])
    }
}

/// Expands a bracket tree with `Λ³H`-element leaves through the cocycle:
/// after rewriting into right-nested combs `[y_1, [y_2, …, [y_{2m−1}, y_{2m}]]]`
/// via the Jacobi identity, each comb contributes
///
/// ```text
///     −Σ_a C([^a(1) y_1, [^a(2) y_2, …]]),
/// ```
///
/// summed over `a : {1..2m−1} → {0,1}` with `[⁰x, y] = x⊗y` and
/// `[¹x, y] = −y⊗x`; the resulting word of leaves is fed to the cocycle.
/// Requires an even leaf count matching the cocycle's arity.
pub fn d_expand(
    t: &FormalCommutator<Wedge3Element>,
    c: &dyn CommutatorCocycle,
) -> Result<GraphVector> {
    let n = t.leaf_count();
    if n % 2 != 0 {
        return Err(Error::invalid(format!(
            "commutator expansion needs an even leaf count, got {n}"
        )));
    }
    if n != c.arity() {
        return Err(Error::invalid(format!(
            "cocycle arity {} does not match leaf count {n}",
            c.arity()
        )));
    }
    let mut total = GraphVector::zero();
    for (seq, comb_sign) in t.comb_expansion() {
        for mask in 0u64..(1u64 << (n - 1)) {
            // Build the tensor word from the innermost leaf outward: bit k
            // (for leaf position k) prepends on 0 and appends with a sign
            // flip on 1.
            let mut word: Vec<Wedge3Element> = vec![seq[n - 1].clone()];
            let mut sign = 1i64;
            for k in (0..n - 1).rev() {
                if mask & (1 << k) == 0 {
                    word.insert(0, seq[k].clone());
                } else {
                    word.push(seq[k].clone());
                    sign = -sign;
                }
            }
            let mut value = c.eval_multi(&word)?;
            value.scale(&Rational::from(-comb_sign * sign));
            total.add(&value);
        }
    }
    Ok(total)
}

/// Outcome of [`d_symmetry_check`].
#[derive(Clone, Debug)]
pub struct DSymmetryReport {
    /// Number of random pairs sampled.
    pub samples: usize,
    /// Equal-leaf brackets expanded to zero under both Lagrangian orders.
    pub degenerate_ok: bool,
    /// Inverting the bracket (`[y_2, y_1]`) negated the swapped-order value:
    /// the degree-one instance of `D(a⁻¹) = −D'(a)`.
    pub inverse_law_ok: bool,
    /// The two Lagrangian orders induce identical antisymmetrized scalar
    /// forms (equal cohomology classes).
    pub class_equality_ok: bool,
}

impl DSymmetryReport {
    /// Whether every check passed.
    pub fn ok(&self) -> bool {
        self.degenerate_ok && self.inverse_law_ok && self.class_equality_ok
    }
}

/// Verifies the inversion symmetry of the degree-one expansion: a commutator
/// inverse negates one leaf at the graded level (from
/// `1 − a⁻¹ ≡ −(1 − a) mod I²`), realized as `[y_2, y_1]` against the
/// swapped-order cocycle; degenerate brackets vanish; and the two orders have
/// equal antisymmetrized forms.
pub fn d_symmetry_check(genus: usize, samples: usize) -> Result<DSymmetryReport> {
    let plus = CocycleC1::new(genus, false)?;
    let minus = CocycleC1::new(genus, true)?;
    let mut rng = ChaCha8Rng::seed_from_u64(41);

    let mut degenerate_ok = true;
    let mut inverse_law_ok = true;
    for _ in 0..samples {
        let y1 = random_wedge(genus, &mut rng);
        let y2 = random_wedge(genus, &mut rng);

        let same = FormalCommutator::bracket(
            FormalCommutator::leaf(y1.clone()),
            FormalCommutator::leaf(y1.clone()),
        );
        if !d_expand(&same, &plus)?.is_zero() || !d_expand(&same, &minus)?.is_zero() {
            degenerate_ok = false;
        }

        let forward = FormalCommutator::bracket(
            FormalCommutator::leaf(y1.clone()),
            FormalCommutator::leaf(y2.clone()),
        );
        let reversed = FormalCommutator::bracket(
            FormalCommutator::leaf(y2.clone()),
            FormalCommutator::leaf(y1.clone()),
        );
        let lhs = d_expand(&reversed, &plus)?;
        let mut rhs = d_expand(&forward, &minus)?;
        rhs.scale(&-Rational::one());
        if lhs != rhs {
            inverse_law_ok = false;
        }
    }

    let form_plus = c_theta_u_form(genus, LagrangianOrder::PlusMinus)?;
    let form_minus = c_theta_u_form(genus, LagrangianOrder::MinusPlus)?;
    let class_equality_ok = cup_class(&form_plus) == cup_class(&form_minus);

    Ok(DSymmetryReport { samples, degenerate_ok, inverse_law_ok, class_equality_ok })
}

// ---------------------------------------------------------------------------
// Edge labeling
// ---------------------------------------------------------------------------

/// One of the three edge labels.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum EdgeKind {
    /// Odd-numbered boundary arcs.
    A,
    /// Chords.
    B,
    /// Even-numbered boundary arcs.
    C,
}

impl fmt::Display for EdgeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EdgeKind::A => write!(f, "a"),
            EdgeKind::B => write!(f, "b"),
            EdgeKind::C => write!(f, "c"),
        }
    }
}

/// A labeled edge name such as `a1`, `b2`, `c3` (indices start at 1).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EdgeSymbol {
    /// The label.
    pub kind: EdgeKind,
    /// The 1-based index within the label.
    pub index: usize,
}

impl fmt::Display for EdgeSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.kind, self.index)
    }
}

impl FromStr for EdgeSymbol {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut chars = s.chars();
        let kind = match chars.next() {
            Some('a') => EdgeKind::A,
            Some('b') => EdgeKind::B,
            Some('c') => EdgeKind::C,
            _ => return Err(Error::invalid(format!("bad edge symbol {s:?}: expected a/b/c prefix"))),
        };
        let rest = chars.as_str();
        let index: usize = rest
            .parse()
            .map_err(|_| Error::invalid(format!("bad edge index in {s:?}")))?;
        if index == 0 {
            return Err(Error::invalid("edge indices start at 1"));
        }
        Ok(EdgeSymbol { kind, index })
    }
}

/// An edge of a labeled diagram: its symbol and the two endpoint positions
/// (0-based positions on the circle).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LabeledEdge {
    /// The label-and-index name.
    pub symbol: EdgeSymbol,
    /// The endpoint positions, `0..2n`.
    pub endpoints: (usize, usize),
}

/// A degree-`n` chord diagram with its full set of `3n` labeled edges: the
/// `n` chords labeled `b`, and the `2n` boundary arcs alternating `a` and `c`
/// around the circle. Every vertex (endpoint position) is incident to exactly
/// one edge of each label.
#[derive(Clone, Debug)]
pub struct LabeledChordDiagram {
    diagram: LinearChordDiagram,
    edges: Vec<LabeledEdge>,
}

impl LabeledChordDiagram {
    /// The underlying chord diagram.
    pub fn diagram(&self) -> &LinearChordDiagram {
        &self.diagram
    }

    /// The diagram degree `n`.
    pub fn degree(&self) -> usize {
        self.diagram.degree()
    }

    /// All `3n` labeled edges: chords first (`b1..bn` by smaller endpoint),
    /// then arcs in circle order (`a1, c1, a2, c2, …`).
    pub fn edges(&self) -> &[LabeledEdge] {
        &self.edges
    }

    /// The `3n` edge symbols.
    pub fn edge_symbols(&self) -> Vec<EdgeSymbol> {
        self.edges.iter().map(|e| e.symbol).collect()
    }

    /// The endpoints of a named edge.
    pub fn endpoints_of(&self, symbol: EdgeSymbol) -> Option<(usize, usize)> {
        self.edges.iter().find(|e| e.symbol == symbol).map(|e| e.endpoints)
    }

    /// The three edges at a vertex, returned as `(a, b, c)` symbols.
    pub fn incident_symbols(&self, position: usize) -> [EdgeSymbol; 3] {
        let n2 = 2 * self.degree();
        assert!(position < n2, "position out of range");
        let mut a = None;
        let mut b = None;
        let mut c = None;
        for e in &self.edges {
            if e.endpoints.0 == position || e.endpoints.1 == position {
                match e.symbol.kind {
                    EdgeKind::A => a = Some(e.symbol),
                    EdgeKind::B => b = Some(e.symbol),
                    EdgeKind::C => c = Some(e.symbol),
                }
            }
        }
        [
            a.expect("every vertex meets an a-arc"),
            b.expect("every vertex meets a chord"),
            c.expect("every vertex meets a c-arc"),
        ]
    }
}

/// Labels the edges of a degree-`n` chord diagram: chords become `b1..bn`
/// (ordered by smaller endpoint), and the `2n` boundary arcs alternate
/// `a1, c1, a2, c2, …` around the circle starting from position 0. Every
/// vertex then meets one `a`, one `b`, and one `c`: its chord, and two arcs
/// of opposite parity.
pub fn label_edges(c: &LinearChordDiagram) -> Result<LabeledChordDiagram> {
    let n = c.degree();
    if n == 0 {
        return Err(Error::invalid("labeling needs degree at least 1"));
    }
    let mut edges = Vec::with_capacity(3 * n);
    for (k, (i, j)) in c.chords().into_iter().enumerate() {
        edges.push(LabeledEdge {
            symbol: EdgeSymbol { kind: EdgeKind::B, index: k + 1 },
            endpoints: (i, j),
        });
    }
    for p in 0..2 * n {
        let symbol = if p % 2 == 0 {
            EdgeSymbol { kind: EdgeKind::A, index: p / 2 + 1 }
        } else {
            EdgeSymbol { kind: EdgeKind::C, index: (p - 1) / 2 + 1 }
        };
        edges.push(LabeledEdge { symbol, endpoints: (p, (p + 1) % (2 * n)) });
    }
    Ok(LabeledChordDiagram { diagram: c.clone(), edges })
}

// ---------------------------------------------------------------------------
// Properness
// ---------------------------------------------------------------------------

/// The graph obtained from a labeled diagram by an edge ordering: proper
/// vertices stay trivalent, improper vertices are split into three univalent
/// ones.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GammaGraph {
    /// Total number of vertices after splitting.
    pub vertex_count: usize,
    /// Vertices that stayed trivalent.
    pub trivalent_count: usize,
    /// Univalent vertices created by splitting (three per improper vertex).
    pub univalent_count: usize,
    /// Edges as `(symbol, node, node)` over the split vertex set.
    pub edges: Vec<(EdgeSymbol, usize, usize)>,
    /// Whether no vertex was split (the graph is the underlying trivalent
    /// graph unchanged).
    pub unchanged: bool,
}

/// Outcome of [`properness`].
#[derive(Clone, Debug)]
pub struct PropernessReport {
    /// Per-position flags: `proper[p]` is whether vertex `p` sees its three
    /// edges in label order `a, b, c` under the ordering.
    pub proper: Vec<bool>,
    /// Whether every vertex is proper.
    pub all_proper: bool,
    /// The split graph.
    pub gamma: GammaGraph,
}

/// Classifies every vertex of a labeled diagram against a total edge
/// ordering: a vertex is proper when its three incident edges, sorted by the
/// ordering, carry labels `a, b, c` in that order. Returns the per-vertex
/// flags and the split graph in which each improper vertex becomes three
/// univalent vertices.
pub fn properness(
    c: &LabeledChordDiagram,
    order: &[EdgeSymbol],
) -> Result<PropernessReport> {
    let symbols = c.edge_symbols();
    if order.len() != symbols.len() {
        return Err(Error::invalid(format!(
            "ordering lists {} edges, diagram has {}",
            order.len(),
            symbols.len()
        )));
    }
    let mut rank: BTreeMap<EdgeSymbol, usize> = BTreeMap::new();
    for (r, s) in order.iter().enumerate() {
        if rank.insert(*s, r).is_some() {
            return Err(Error::invalid(format!("edge {s} appears twice in the ordering")));
        }
    }
    let all: BTreeSet<EdgeSymbol> = symbols.iter().copied().collect();
    for s in order {
        if !all.contains(s) {
            return Err(Error::invalid(format!("edge {s} is not an edge of the diagram")));
        }
    }

    let n2 = 2 * c.degree();
    let mut proper = Vec::with_capacity(n2);
    for p in 0..n2 {
        let [a, b, cc] = c.incident_symbols(p);
        proper.push(rank[&a] < rank[&b] && rank[&b] < rank[&cc]);
    }
    let all_proper = proper.iter().all(|&x| x);

    // Assign node ids: proper vertices keep one node; improper vertices get
    // one node per incident edge.
    let mut node_of: BTreeMap<(usize, EdgeSymbol), usize> = BTreeMap::new();
    let mut next = 0usize;
    for p in 0..n2 {
        let incident = c.incident_symbols(p);
        if proper[p] {
            for s in incident {
                node_of.insert((p, s), next);
            }
            next += 1;
        } else {
            for s in incident {
                node_of.insert((p, s), next);
                next += 1;
            }
        }
    }
    let edges = c
        .edges()
        .iter()
        .map(|e| (e.symbol, node_of[&(e.endpoints.0, e.symbol)], node_of[&(e.endpoints.1, e.symbol)]))
        .collect();
    let improper_count = proper.iter().filter(|&&x| !x).count();
    let gamma = GammaGraph {
        vertex_count: next,
        trivalent_count: n2 - improper_count,
        univalent_count: 3 * improper_count,
        edges,
        unchanged: all_proper,
    };
    Ok(PropernessReport { proper, all_proper, gamma })
}

// ---------------------------------------------------------------------------
// Proper commutator certification
// ---------------------------------------------------------------------------

/// Outcome of [`proper_commutator_check`].
#[derive(Clone, Debug)]
pub struct ProperCommutatorReport {
    /// Total monomials in the expansion (`2^(3n−1)` for `3n` edges).
    pub monomial_count: usize,
    /// Monomials whose induced ordering makes every vertex proper.
    pub proper_count: usize,
    /// Monomials with at least one improper vertex.
    pub improper_count: usize,
    /// The coefficient of the proper monomial, when unique.
    pub proper_coefficient: Option<i64>,
    /// The proper monomial itself, when unique.
    pub proper_monomial: Option<Vec<EdgeSymbol>>,
}

impl ProperCommutatorReport {
    /// The certificate: exactly one proper monomial, with coefficient `±1`,
    /// and every other monomial improper.
    pub fn ok(&self) -> bool {
        self.proper_count == 1
            && matches!(self.proper_coefficient, Some(1) | Some(-1))
            && self.improper_count == self.monomial_count - 1
    }
}

/// Expands the leading-term functional `L` of a bracket word in the free
/// associative algebra on the leaves: `L(leaf) = z` and
/// `L([u, v]) = −(L(u)L(v) − L(v)L(u))`. Every monomial uses each leaf once;
/// there are `2^(k−1)` of them for `k` leaves, each with coefficient `±1`.
fn l_monomials(t: &FormalCommutator<EdgeSymbol>) -> Vec<(Vec<EdgeSymbol>, i64)> {
    match t {
        FormalCommutator::Leaf(s) => vec![(vec![*s], 1)],
        FormalCommutator::Bracket(u, v) => {
            let mu = l_monomials(u);
            let mv = l_monomials(v);
            let mut out = Vec::with_capacity(2 * mu.len() * mv.len());
            for (a, sa) in &mu {
                for (b, sb) in &mv {
                    let mut uv = a.clone();
                    uv.extend_from_slice(b);
                    out.push((uv, -sa * sb));
                    let mut vu = b.clone();
                    vu.extend_from_slice(a);
                    out.push((vu, sa * sb));
                }
            }
            out
        }
    }
}

/// Certifies a bracket word over the edge symbols of a labeled diagram:
/// expands its leading term `L` (a homogeneous sum of `±` monomials, each a
/// permutation of all `3n` edges), classifies each monomial by whether the
/// ordering it induces makes every vertex proper, and demands exactly one
/// proper monomial with coefficient `±1`. Errors when the word does not use
/// each edge exactly once.
pub fn proper_commutator_check(
    c: &LabeledChordDiagram,
    t: &FormalCommutator<EdgeSymbol>,
) -> Result<ProperCommutatorReport> {
    let mut needed: BTreeSet<EdgeSymbol> = c.edge_symbols().into_iter().collect();
    for leaf in t.leaves() {
        if !needed.remove(leaf) {
            return Err(Error::invalid(format!(
                "edge {leaf} is repeated or is not an edge of the diagram"
            )));
        }
    }
    if let Some(missing) = needed.into_iter().next() {
        return Err(Error::invalid(format!("edge {missing} is missing from the commutator")));
    }

    let n2 = 2 * c.degree();
    let incidences: Vec<[EdgeSymbol; 3]> = (0..n2).map(|p| c.incident_symbols(p)).collect();
    let monomials = l_monomials(t);
    let monomial_count = monomials.len();
    let mut proper_count = 0usize;
    let mut proper_coefficient = None;
    let mut proper_monomial = None;
    for (mono, coeff) in &monomials {
        let mut rank: BTreeMap<EdgeSymbol, usize> = BTreeMap::new();
        for (r, s) in mono.iter().enumerate() {
            rank.insert(*s, r);
        }
        let proper = incidences
            .iter()
            .all(|[a, b, cc]| rank[a] < rank[b] && rank[b] < rank[cc]);
        if proper {
            proper_count += 1;
            proper_coefficient = Some(*coeff);
            proper_monomial = Some(mono.clone());
        }
    }
    Ok(ProperCommutatorReport {
        monomial_count,
        proper_count,
        improper_count: monomial_count - proper_count,
        proper_coefficient,
        proper_monomial,
    })
}

/// Builds a proper-ordering certificate by the greedy merge procedure: start
/// from an incident `a`–`b` pair as `[a_r, b_s]`; repeatedly absorb an unused
/// `a` incident to the core as `[a, core]`, else an unused `b` as
/// `[core, b]`; when the `a/b` phase stalls, absorb `c`'s as `[core, c]` and
/// `b`'s as `[b, core]`; alternate phases until every edge joins (the
/// boundary arcs keep the incidence graph connected, so this terminates).
pub fn build_proper_commutator(
    c: &LabeledChordDiagram,
) -> Result<FormalCommutator<EdgeSymbol>> {
    let edges = c.edges();
    let endpoints: BTreeMap<EdgeSymbol, (usize, usize)> =
        edges.iter().map(|e| (e.symbol, e.endpoints)).collect();
    let touches = |s: EdgeSymbol, t: EdgeSymbol| -> bool {
        let (a0, a1) = endpoints[&s];
        let (b0, b1) = endpoints[&t];
        a0 == b0 || a0 == b1 || a1 == b0 || a1 == b1
    };

    // Seed: the lexicographically first incident a–b pair.
    let mut seed = None;
    'outer: for e in edges.iter().filter(|e| e.symbol.kind == EdgeKind::A) {
        for f in edges.iter().filter(|f| f.symbol.kind == EdgeKind::B) {
            if touches(e.symbol, f.symbol) {
                seed = Some((e.symbol, f.symbol));
                break 'outer;
            }
        }
    }
    let (a0, b0) = seed.ok_or_else(|| Error::invalid("no incident a-b pair"))?;
    let mut core = FormalCommutator::bracket(FormalCommutator::leaf(a0), FormalCommutator::leaf(b0));
    let mut used: BTreeSet<EdgeSymbol> = [a0, b0].into_iter().collect();
    let total = edges.len();

    let next_unused = |used: &BTreeSet<EdgeSymbol>, kind: EdgeKind| -> Option<EdgeSymbol> {
        edges
            .iter()
            .map(|e| e.symbol)
            .filter(|s| s.kind == kind && !used.contains(s))
            .find(|s| used.iter().any(|u| touches(*s, *u)))
    };

    while used.len() < total {
        let before = used.len();
        // Phase one: a's to the left, b's to the right.
        loop {
            if let Some(a) = next_unused(&used, EdgeKind::A) {
                core = FormalCommutator::bracket(FormalCommutator::leaf(a), core);
                used.insert(a);
            } else if let Some(b) = next_unused(&used, EdgeKind::B) {
                core = FormalCommutator::bracket(core, FormalCommutator::leaf(b));
                used.insert(b);
            } else {
                break;
            }
        }
        // Phase two: c's to the right, b's to the left.
        loop {
            if let Some(cc) = next_unused(&used, EdgeKind::C) {
                core = FormalCommutator::bracket(core, FormalCommutator::leaf(cc));
                used.insert(cc);
            } else if let Some(b) = next_unused(&used, EdgeKind::B) {
                core = FormalCommutator::bracket(FormalCommutator::leaf(b), core);
                used.insert(b);
            } else {
                break;
            }
        }
        if used.len() == before {
            return Err(Error::verification(
                "greedy merge stalled: the edge incidence graph is disconnected",
            ));
        }
    }
    Ok(core)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chordspace::enumerate_chords;
    use crate::symplectic::{h_to_wedge3, SymplecticTensor};

    fn wedge(genus: usize, a: u16, b: u16, c: u16) -> Wedge3Element {
        Wedge3Element::wedge(genus, a, b, c).expect("distinct indices")
    }

    #[test]
    fn c1_matches_the_theta_normalization() {
        let genus = 3;
        let c = CocycleC1::new(genus, false).unwrap();
        // x-triple indices 0,1,2; y-triple indices g..g+2.
        let xs = wedge(genus, 0, 1, 2);
        let ys = wedge(genus, 3, 4, 5);

        // The distinguished pair evaluates to minus the theta class.
        let value = c1_eval(&c, &xs, &ys).unwrap();
        let mut expected = theta_w_vector();
        expected.scale(&-Rational::one());
        assert_eq!(value, expected);

        // Zero in either slot gives zero.
        let zero = Wedge3Element::zero(genus);
        assert!(c1_eval(&c, &zero, &ys).unwrap().is_zero());
        assert!(c1_eval(&c, &xs, &zero).unwrap().is_zero());

        // The weight functional is normalized by W(theta) = -2, so composing
        // recovers twice the coordinate cocycle.
        let w = WeightSystemW::new();
        assert_eq!(w.eval(&theta_w_vector()).unwrap(), Rational::from(-2));
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..10 {
            let a = random_wedge(genus, &mut rng);
            let b = random_wedge(genus, &mut rng);
            let lhs = w.eval(&c1_eval(&c, &a, &b).unwrap()).unwrap();
            let rhs = &Rational::from(2) * &c_theta_u(&a, &b, LagrangianOrder::PlusMinus).unwrap();
            assert_eq!(lhs, rhs, "W after the cocycle must be twice the coordinate form");
        }
    }

    #[test]
    fn c1_is_bilinear_and_kills_h_copies() {
        let genus = 3;
        let c = CocycleC1::new(genus, false).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..6 {
            let a = random_wedge(genus, &mut rng);
            let a2 = random_wedge(genus, &mut rng);
            let b = random_wedge(genus, &mut rng);

            let mut sum = a.clone();
            sum.add_scaled(&a2, &Rational::from(3));
            let lhs = c1_eval(&c, &sum, &b).unwrap();
            let mut rhs = c1_eval(&c, &a, &b).unwrap();
            let mut scaled = c1_eval(&c, &a2, &b).unwrap();
            scaled.scale(&Rational::from(3));
            rhs.add(&scaled);
            assert_eq!(lhs, rhs, "bilinearity in the first slot");
        }

        // The embedded H-copy v -> sum_i v ^ x_i ^ y_i is annihilated on both
        // sides, so the pairing descends to U.
        for k in 0..2 * genus as u16 {
            let mut v = SymplecticTensor::zero(genus, 1);
            v.add_term(vec![k], Rational::one()).unwrap();
            let h_copy = h_to_wedge3(&v).unwrap();
            let probe = random_wedge(genus, &mut rng);
            assert!(c1_eval(&c, &h_copy, &probe).unwrap().is_zero());
            assert!(c1_eval(&c, &probe, &h_copy).unwrap().is_zero());
        }
    }

    #[test]
    fn cocycle_identity_holds_and_perturbations_are_detected() {
        let c = CocycleC1::new(2, false).unwrap();
        let report = c1_is_cocycle(&c, 8).unwrap();
        assert!(report.cocycle_identity_holds, "bilinear pairing is a 2-cocycle");
        assert!(report.perturbation_detected, "non-bilinear perturbation must fail");
        assert!(report.sign_law_holds, "swapped order negates transposed arguments");
        assert!(report.ok());
    }

    #[test]
    fn d_expand_matches_the_two_term_antisymmetrization() {
        let genus = 3;
        let c = CocycleC1::new(genus, false).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..5 {
            let y1 = random_wedge(genus, &mut rng);
            let y2 = random_wedge(genus, &mut rng);
            let tree = FormalCommutator::bracket(
                FormalCommutator::leaf(y1.clone()),
                FormalCommutator::leaf(y2.clone()),
            );
            let value = d_expand(&tree, &c).unwrap();
            // -(C(y1,y2) - C(y2,y1)) = (ctu(y1,y2) - ctu(y2,y1)) * theta.
            let coeff = &c_theta_u(&y1, &y2, LagrangianOrder::PlusMinus).unwrap()
                - &c_theta_u(&y2, &y1, LagrangianOrder::PlusMinus).unwrap();
            let mut expected = theta_w_vector();
            expected.scale(&coeff);
            assert_eq!(value, expected);
        }

        // Equal leaves collapse to zero.
        let y = random_wedge(genus, &mut rng);
        let same = FormalCommutator::bracket(
            FormalCommutator::leaf(y.clone()),
            FormalCommutator::leaf(y.clone()),
        );
        assert!(d_expand(&same, &c).unwrap().is_zero());

        // Multilinearity in a leaf.
        let a = random_wedge(genus, &mut rng);
        let b = random_wedge(genus, &mut rng);
        let g = random_wedge(genus, &mut rng);
        let mut combo = a.clone();
        combo.add_scaled(&b, &Rational::from(2));
        let leafing = |u: &Wedge3Element, v: &Wedge3Element| {
            FormalCommutator::bracket(
                FormalCommutator::leaf(u.clone()),
                FormalCommutator::leaf(v.clone()),
            )
        };
        let lhs = d_expand(&leafing(&combo, &g), &c).unwrap();
        let mut rhs = d_expand(&leafing(&a, &g), &c).unwrap();
        let mut twice = d_expand(&leafing(&b, &g), &c).unwrap();
        twice.scale(&Rational::from(2));
        rhs.add(&twice);
        assert_eq!(lhs, rhs);

        // Odd leaf counts are rejected.
        let odd = FormalCommutator::bracket(
            FormalCommutator::leaf(a.clone()),
            FormalCommutator::bracket(FormalCommutator::leaf(b), FormalCommutator::leaf(g)),
        );
        assert!(d_expand(&odd, &c).is_err());
    }

    #[test]
    fn jacobi_rewrite_matches_comb_expansion() {
        let t = |s: &str| parse_commutator(s).unwrap();
        let collect = |trees: &[(FormalCommutator<String>, i64)]| -> BTreeMap<Vec<String>, i64> {
            let mut map = BTreeMap::new();
            for (tree, outer) in trees {
                for (seq, sign) in tree.comb_expansion() {
                    *map.entry(seq).or_insert(0) += outer * sign;
                }
            }
            map.retain(|_, v| *v != 0);
            map
        };

        // [[a,b],c] = [a,[b,c]] - [b,[a,c]].
        let lhs = collect(&[(t("[[x1,x2],x3]"), 1)]);
        let rhs = collect(&[(t("[x1,[x2,x3]]"), 1), (t("[x2,[x1,x3]]"), -1)]);
        assert_eq!(lhs, rhs);

        // A balanced 4-leaf bracket expands into two combs.
        let balanced = t("[[x1,x2],[x3,x4]]").comb_expansion();
        assert_eq!(balanced.len(), 2);

        // Round trip of the parser.
        assert_eq!(t("[x1,[x2,x3]]").to_string(), "[x1,[x2,x3]]");
        assert!(parse_commutator("[x1,x2").is_err());
        assert!(parse_commutator("[x1 x2]").is_err());
        assert!(parse_commutator("").is_err());
    }

    #[test]
    fn d_symmetry_reports_consistency() {
        let report = d_symmetry_check(3, 6).unwrap();
        assert!(report.degenerate_ok);
        assert!(report.inverse_law_ok);
        assert!(report.class_equality_ok);
        assert!(report.ok());
    }

    #[test]
    fn labeling_assigns_all_three_labels_at_every_vertex() {
        // Exhaustive over every diagram of degree at most 6.
        for m in 1..=6usize {
            for d in enumerate_chords(m).unwrap() {
                let labeled = label_edges(&d).unwrap();
                assert_eq!(labeled.edges().len(), 3 * m);
                for p in 0..2 * m {
                    let [a, b, c] = labeled.incident_symbols(p);
                    assert_eq!(a.kind, EdgeKind::A);
                    assert_eq!(b.kind, EdgeKind::B);
                    assert_eq!(c.kind, EdgeKind::C);
                }
            }
        }

        // Degree 1 explicitly: arcs a1 and c1, chord b1.
        let single = LinearChordDiagram::from_pairs(1, &[(0, 1)]).unwrap();
        let labeled = label_edges(&single).unwrap();
        let symbols = labeled.edge_symbols();
        let names: Vec<String> = symbols.iter().map(|s| s.to_string()).collect();
        assert_eq!(names, vec!["b1", "a1", "c1"]);
        assert_eq!(labeled.endpoints_of("a1".parse().unwrap()), Some((0, 1)));
        assert_eq!(labeled.endpoints_of("c1".parse().unwrap()), Some((1, 0)));
    }

    #[test]
    fn properness_splits_improper_vertices() {
        // The crossing diagram of degree 2.
        let d = LinearChordDiagram::from_pairs(2, &[(0, 2), (1, 3)]).unwrap();
        let labeled = label_edges(&d).unwrap();

        // Sorted ordering a1 a2 b1 b2 c1 c2: every vertex proper.
        let sorted: Vec<EdgeSymbol> = ["a1", "a2", "b1", "b2", "c1", "c2"]
            .iter()
            .map(|s| s.parse().unwrap())
            .collect();
        let report = properness(&labeled, &sorted).unwrap();
        assert!(report.all_proper);
        assert!(report.gamma.unchanged);
        assert_eq!(report.gamma.vertex_count, 4);
        assert_eq!(report.gamma.trivalent_count, 4);
        assert_eq!(report.gamma.univalent_count, 0);

        // Moving b1 to the front breaks exactly its two endpoints.
        let bad: Vec<EdgeSymbol> = ["b1", "a1", "a2", "b2", "c1", "c2"]
            .iter()
            .map(|s| s.parse().unwrap())
            .collect();
        let report = properness(&labeled, &bad).unwrap();
        let (e0, e1) = labeled.endpoints_of("b1".parse().unwrap()).unwrap();
        for p in 0..4 {
            assert_eq!(report.proper[p], p != e0 && p != e1);
        }
        assert!(!report.all_proper);
        assert!(!report.gamma.unchanged);
        assert_eq!(report.gamma.univalent_count, 6);
        assert_eq!(report.gamma.vertex_count, 2 + 6);

        // Orderings must be permutations of the edge set.
        let short = &sorted[..5];
        assert!(properness(&labeled, short).is_err());
        let mut doubled = sorted.clone();
        doubled[5] = doubled[0];
        assert!(properness(&labeled, &doubled).is_err());
    }

    #[test]
    fn degree_one_commutator_has_exactly_one_proper_monomial() {
        let d = LinearChordDiagram::from_pairs(1, &[(0, 1)]).unwrap();
        let labeled = label_edges(&d).unwrap();
        let tree = parse_commutator("[[a1,b1],c1]")
            .unwrap()
            .try_map(&mut |s: &String| s.parse::<EdgeSymbol>())
            .unwrap();
        let report = proper_commutator_check(&labeled, &tree).unwrap();
        assert_eq!(report.monomial_count, 4);
        assert_eq!(report.proper_count, 1);
        assert_eq!(report.improper_count, 3);
        assert_eq!(report.proper_coefficient, Some(1));
        let names: Vec<String> = report
            .proper_monomial
            .as_ref()
            .unwrap()
            .iter()
            .map(|s| s.to_string())
            .collect();
        assert_eq!(names, vec!["a1", "b1", "c1"]);
        assert!(report.ok());

        // Missing or repeated edges are rejected.
        let missing = parse_commutator("[a1,b1]")
            .unwrap()
            .try_map(&mut |s: &String| s.parse::<EdgeSymbol>())
            .unwrap();
        assert!(proper_commutator_check(&labeled, &missing).is_err());
        let repeated = parse_commutator("[[a1,b1],a1]")
            .unwrap()
            .try_map(&mut |s: &String| s.parse::<EdgeSymbol>())
            .unwrap();
        assert!(proper_commutator_check(&labeled, &repeated).is_err());
    }

    #[test]
    fn greedy_construction_passes_for_small_degrees() {
        for m in 1..=3usize {
            for d in enumerate_chords(m).unwrap() {
                let labeled = label_edges(&d).unwrap();
                let tree = build_proper_commutator(&labeled).unwrap();
                assert_eq!(tree.leaf_count(), 3 * m);
                let report = proper_commutator_check(&labeled, &tree).unwrap();
                assert_eq!(report.monomial_count, 1 << (3 * m - 1));
                assert!(
                    report.ok(),
                    "greedy certificate failed for {:?}: {} proper monomials",
                    d.chords(),
                    report.proper_count
                );
            }
        }
    }

    #[test]
    fn transvected_lagrangian_pair_gives_a_different_class() {
        // Pull the cocycle back along the symplectic transvection
        // T(w) = w + om(w, u)·u with u = x1 + y2, and compare
        // antisymmetrized scalar forms on the wedge basis: the transvected
        // pair defines a different cohomology class.
        let genus = 3;
        let space = SymplecticSpace::new(genus).unwrap();
        let u_vec: Vec<(u16, Rational)> =
            vec![(0, Rational::one()), (4, Rational::one())]; // x1 + y2
        let omega_with_u = |k: u16| -> Rational {
            u_vec
                .iter()
                .fold(Rational::zero(), |acc, (i, ci)| &acc + &(ci * &Rational::from(space.omega(k, *i))))
        };
        // Inverse transvection on a basis vector: e_k - om(e_k, u)·u.
        let inverse_image = |k: u16| -> Vec<(u16, Rational)> {
            let mut out = vec![(k, Rational::one())];
            let c = omega_with_u(k);
            if !c.is_zero() {
                for (i, ci) in &u_vec {
                    out.push((*i, -(&c * ci)));
                }
            }
            out
        };
        let transvect_wedge = |w: &Wedge3Element| -> Wedge3Element {
            let mut out = Wedge3Element::zero(genus);
            for (&[i, j, k], c) in w.entries() {
                for (a, ca) in inverse_image(i) {
                    for (b, cb) in inverse_image(j) {
                        for (d, cd) in inverse_image(k) {
                            let coeff = &(&(&ca * &cb) * &cd) * c;
                            out.add_wedge([a, b, d], coeff);
                        }
                    }
                }
            }
            out
        };

        let c = CocycleC1::new(genus, false).unwrap();
        let triples = wedge_triples(genus);
        let basis: Vec<Wedge3Element> = triples
            .iter()
            .map(|&[a, b, d]| wedge(genus, a, b, d))
            .collect();
        let form = |pullback: bool| -> Vec<Vec<Rational>> {
            basis
                .iter()
                .map(|wi| {
                    basis
                        .iter()
                        .map(|wj| {
                            let (ai, aj) = if pullback {
                                (transvect_wedge(wi), transvect_wedge(wj))
                            } else {
                                (wi.clone(), wj.clone())
                            };
                            c.coefficient(&ai, &aj).unwrap()
                        })
                        .collect()
                })
                .collect()
        };
        let original = cup_class(&form(false));
        let transvected = cup_class(&form(true));
        assert_ne!(original, transvected, "transvected pair must change the class");
    }
}
