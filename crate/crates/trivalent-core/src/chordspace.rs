//! Linear chord diagrams and their signed quotients.
//!
//! A degree-`m` *linear chord diagram* is a fixed-point-free involution on
//! positions `{0..2m}` (rendered 1-based in JSON); a *colored* diagram
//! additionally orients every chord. A degree-`3m` diagram maps to a
//! trivalent graph of degree `m` by collapsing each consecutive position
//! triple `{3j, 3j+1, 3j+2}` to a vertex whose orientation is induced by the
//! natural order ([`chord_to_graph`]).
//!
//! The vertex-ordered graph spaces live here as *signed orbits* of chord
//! diagrams under the within-triple permutation group `S₃^{2m}`
//! ([`arp_space`]). The group is generated by adjacent within-triple
//! transpositions; a generator `σ` acts on positions and carries the sign
//!
//! * uncolored: `sgn(σ) · (−1)^{#chords whose smaller-first endpoint order
//!   is reversed}` — for an adjacent transposition only a chord joining the
//!   two swapped positions flips, so the extra factor is −1 exactly when the
//!   swap reverses a chord;
//! * colored: `sgn(σ)` alone — orientations are transported as data, so a
//!   chord's stored direction is never "reversed" relative to itself.
//!
//! A class is zero precisely when a stabilizer element acts with net sign
//! −1. Under this definition the *uncolored* diagram with a within-triple
//! chord (tadpole) survives — the loop transposition contributes
//! `sgn = −1` times a chord flip `−1` — while the same graph dies in the
//! isomorphism-class graph quotient. This is deliberate: it is the unique
//! quotient compatible with the symplectic contraction maps, whose invariant
//! spaces the classes must span. The `nl` ("no loop") variants additionally
//! kill every class whose diagram has a within-triple chord.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::graphspace::{degree_cap, OrientedTrivalentGraph};
use crate::{Error, Result};

/// Default degree cap for uncolored chord enumeration.
pub const DEFAULT_CHORD_CAP: usize = 6;
/// Default degree cap for colored chord enumeration.
pub const DEFAULT_COLORED_CHORD_CAP: usize = 5;
/// Default cap on the *graph* degree `m` of the signed-orbit quotients
/// (their diagrams have chord degree `3m`; the colored orbit space at
/// `m = 2` already holds 665,280 diagrams).
pub const DEFAULT_ARP_CAP: usize = 2;

// ===== diagrams =====

/// A linear chord diagram: a fixed-point-free involution on `0..2m`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LinearChordDiagram {
    degree: usize,
    pairing: Vec<usize>,
}

impl LinearChordDiagram {
    /// Builds from the involution array `pairing[p] = partner of p`.
    pub fn from_involution(pairing: Vec<usize>) -> Result<Self> {
        let n = pairing.len();
        if n % 2 != 0 {
            return Err(Error::invalid("chord diagram needs an even position count"));
        }
        for p in 0..n {
            let q = pairing[p];
            if q >= n || q == p || pairing[q] != p {
                return Err(Error::invalid(format!(
                    "pairing is not a fixed-point-free involution at position {p}"
                )));
            }
        }
        Ok(LinearChordDiagram { degree: n / 2, pairing })
    }

    /// Builds from chord endpoint pairs over `0..2m`.
    pub fn from_pairs(degree: usize, pairs: &[(usize, usize)]) -> Result<Self> {
        let n = 2 * degree;
        if pairs.len() != degree {
            return Err(Error::invalid(format!("expected {degree} chords, got {}", pairs.len())));
        }
        let mut pairing = vec![usize::MAX; n];
        for &(i, j) in pairs {
            if i >= n || j >= n || i == j {
                return Err(Error::invalid(format!("bad chord ({i}, {j})")));
            }
            if pairing[i] != usize::MAX || pairing[j] != usize::MAX {
                return Err(Error::invalid(format!("position reused by chord ({i}, {j})")));
            }
            pairing[i] = j;
            pairing[j] = i;
        }
        LinearChordDiagram::from_involution(pairing)
    }

    /// Number of chords `m`.
    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Partner of position `p`.
    pub fn partner(&self, p: usize) -> usize {
        self.pairing[p]
    }

    /// Chords as `(i, j)` with `i < j`, sorted by `i`.
    pub fn chords(&self) -> Vec<(usize, usize)> {
        (0..self.pairing.len())
            .filter(|&p| p < self.pairing[p])
            .map(|p| (p, self.pairing[p]))
            .collect()
    }

    /// True iff some chord joins two positions of one consecutive triple
    /// `{3j, 3j+1, 3j+2}` (meaningful for degree-3m diagrams).
    pub fn has_within_triple_chord(&self) -> bool {
        self.chords().iter().any(|&(i, j)| i / 3 == j / 3)
    }
}

/// A chord diagram with an orientation (ordered endpoint pair) per chord.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ColoredLinearChordDiagram {
    base: LinearChordDiagram,
    /// One `(from, to)` per chord, sorted by the smaller endpoint.
    arrows: Vec<(usize, usize)>,
}

impl ColoredLinearChordDiagram {
    /// Builds from a diagram and one arrow per chord (any order; each arrow's
    /// endpoint set must be a chord of the diagram).
    pub fn new(base: LinearChordDiagram, arrows: Vec<(usize, usize)>) -> Result<Self> {
        if arrows.len() != base.degree() {
            return Err(Error::invalid("need exactly one arrow per chord"));
        }
        let mut sorted = arrows;
        sorted.sort_by_key(|&(a, b)| a.min(b));
        for (&(i, j), &(a, b)) in base.chords().iter().zip(&sorted) {
            if (a, b) != (i, j) && (a, b) != (j, i) {
                return Err(Error::invalid(format!(
                    "arrow ({a}, {b}) does not match chord ({i}, {j})"
                )));
            }
        }
        Ok(ColoredLinearChordDiagram { base, arrows: sorted })
    }

    /// The underlying uncolored diagram.
    pub fn diagram(&self) -> &LinearChordDiagram {
        &self.base
    }

    /// Arrows `(from, to)`, sorted by smaller endpoint.
    pub fn arrows(&self) -> &[(usize, usize)] {
        &self.arrows
    }

    /// Number of chords.
    pub fn degree(&self) -> usize {
        self.base.degree()
    }
}

/// Serialized chord diagram: positions are 1-based in JSON, matching the
/// usual `{1..2m}` convention; `colors` (oriented `[from, to]` pairs) is
/// present exactly for colored diagrams. Canonical output sorts `pairs` by
/// smaller endpoint.
#[derive(Serialize, Deserialize, Debug, Clone)]
pub struct ChordJson {
    /// Number of chords.
    pub degree: usize,
    /// Chord endpoint pairs, 1-based.
    pub pairs: Vec<[usize; 2]>,
    /// Optional per-chord orientations, 1-based.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub colors: Option<Vec<[usize; 2]>>,
}

impl From<&LinearChordDiagram> for ChordJson {
    fn from(d: &LinearChordDiagram) -> Self {
        ChordJson {
            degree: d.degree(),
            pairs: d.chords().iter().map(|&(i, j)| [i + 1, j + 1]).collect(),
            colors: None,
        }
    }
}

impl From<&ColoredLinearChordDiagram> for ChordJson {
    fn from(d: &ColoredLinearChordDiagram) -> Self {
        ChordJson {
            degree: d.degree(),
            pairs: d.diagram().chords().iter().map(|&(i, j)| [i + 1, j + 1]).collect(),
            colors: Some(d.arrows().iter().map(|&(a, b)| [a + 1, b + 1]).collect()),
        }
    }
}

impl TryFrom<&ChordJson> for LinearChordDiagram {
    type Error = Error;

    fn try_from(j: &ChordJson) -> Result<Self> {
        let pairs: Vec<(usize, usize)> = j
            .pairs
            .iter()
            .map(|&[a, b]| {
                if a == 0 || b == 0 {
                    Err(Error::invalid("chord positions are 1-based"))
                } else {
                    Ok((a - 1, b - 1))
                }
            })
            .collect::<Result<_>>()?;
        LinearChordDiagram::from_pairs(j.degree, &pairs)
    }
}

impl TryFrom<&ChordJson> for ColoredLinearChordDiagram {
    type Error = Error;

    fn try_from(j: &ChordJson) -> Result<Self> {
        let base = LinearChordDiagram::try_from(j)?;
        let colors = j
            .colors
            .as_ref()
            .ok_or_else(|| Error::invalid("colored diagram needs a colors field"))?;
        let arrows: Vec<(usize, usize)> = colors
            .iter()
            .map(|&[a, b]| {
                if a == 0 || b == 0 {
                    Err(Error::invalid("arrow positions are 1-based"))
                } else {
                    Ok((a - 1, b - 1))
                }
            })
            .collect::<Result<_>>()?;
        ColoredLinearChordDiagram::new(base, arrows)
    }
}

// ===== enumeration =====

/// All degree-`m` linear chord diagrams, in deterministic order
/// (recursively pairing the smallest free position). Count: `(2m−1)!!`.
pub fn enumerate_chords(m: usize) -> Result<Vec<LinearChordDiagram>> {
    let cap = degree_cap(DEFAULT_CHORD_CAP);
    if m > cap {
        return Err(Error::CapExceeded(format!("chord degree {m} exceeds cap {cap}")));
    }
    Ok(enumerate_chords_unchecked(m))
}

fn enumerate_chords_unchecked(m: usize) -> Vec<LinearChordDiagram> {
    let n = 2 * m;
    let mut out = Vec::new();
    let mut pairing = vec![usize::MAX; n];
    fn rec(pairing: &mut Vec<usize>, out: &mut Vec<LinearChordDiagram>) {
        let Some(p) = pairing.iter().position(|&x| x == usize::MAX) else {
            out.push(
                LinearChordDiagram::from_involution(pairing.clone())
                    .expect("enumeration yields valid involutions"),
            );
            return;
        };
        for q in (p + 1)..pairing.len() {
            if pairing[q] == usize::MAX {
                pairing[p] = q;
                pairing[q] = p;
                rec(pairing, out);
                pairing[p] = usize::MAX;
                pairing[q] = usize::MAX;
            }
        }
    }
    rec(&mut pairing, &mut out);
    out
}

/// All degree-`m` colored diagrams: every diagram with every orientation
/// assignment, deterministic order. Count: `(2m−1)!! · 2^m`.
pub fn enumerate_colored_chords(m: usize) -> Result<Vec<ColoredLinearChordDiagram>> {
    let cap = degree_cap(DEFAULT_COLORED_CHORD_CAP);
    if m > cap {
        return Err(Error::CapExceeded(format!("colored chord degree {m} exceeds cap {cap}")));
    }
    Ok(enumerate_colored_chords_unchecked(m))
}

fn enumerate_colored_chords_unchecked(m: usize) -> Vec<ColoredLinearChordDiagram> {
    let mut out = Vec::new();
    for base in enumerate_chords_unchecked(m) {
        let chords = base.chords();
        for mask in 0..(1u32 << m) {
            let arrows: Vec<(usize, usize)> = chords
                .iter()
                .enumerate()
                .map(|(k, &(i, j))| if mask >> k & 1 == 0 { (i, j) } else { (j, i) })
                .collect();
            out.push(
                ColoredLinearChordDiagram::new(base.clone(), arrows)
                    .expect("enumerated arrows match chords"),
            );
        }
    }
    out
}

// ===== chord → graph =====

/// Collapses a degree-`3m` diagram to its trivalent graph: vertex `j` is the
/// position triple `{3j, 3j+1, 3j+2}` with orientation induced by the
/// natural order, edges are the chords. The triple list order is the vertex
/// ordering; a coloring rides along unchanged on the colored variant.
pub fn chord_to_graph(c: &LinearChordDiagram) -> Result<OrientedTrivalentGraph> {
    if c.degree() % 3 != 0 {
        return Err(Error::invalid(format!(
            "chord degree {} is not divisible by 3",
            c.degree()
        )));
    }
    let n_vertices = 2 * c.degree() / 3;
    let triples = (0..n_vertices).map(|j| [3 * j, 3 * j + 1, 3 * j + 2]).collect();
    let pairing = (0..2 * c.degree()).map(|p| c.partner(p)).collect();
    OrientedTrivalentGraph::new(triples, pairing)
}

// ===== the signed-orbit quotients =====

/// Variant selector for [`arp_space`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArpVariant {
    /// Uncolored, loops kept.
    Rp,
    /// Uncolored, loop classes killed.
    RpNl,
    /// Colored, loops kept.
    RpCl,
    /// Colored, loop classes killed.
    RpNlCl,
}

impl ArpVariant {
    /// Parses the CLI spelling (`rp`, `rp_nl`, `rp_cl`, `rp_nl_cl`).
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "rp" => Ok(ArpVariant::Rp),
            "rp_nl" => Ok(ArpVariant::RpNl),
            "rp_cl" => Ok(ArpVariant::RpCl),
            "rp_nl_cl" => Ok(ArpVariant::RpNlCl),
            _ => Err(Error::invalid(format!("unknown variant `{s}`"))),
        }
    }

    /// True for the colored variants.
    pub fn colored(self) -> bool {
        matches!(self, ArpVariant::RpCl | ArpVariant::RpNlCl)
    }

    /// True for the variants that kill loop classes.
    pub fn no_loop(self) -> bool {
        matches!(self, ArpVariant::RpNl | ArpVariant::RpNlCl)
    }
}

/// Orbit representative: plain or colored diagram.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ClassRep {
    /// Representative of an uncolored class.
    Plain(LinearChordDiagram),
    /// Representative of a colored class.
    Colored(ColoredLinearChordDiagram),
}

/// A signed orbit of degree-`3m` (colored) chord diagrams under the
/// within-triple permutation action.
#[derive(Clone, Debug)]
pub struct DecoratedGraphClass {
    /// The minimal diagram of the orbit (deterministic representative).
    pub representative: ClassRep,
    /// Orbit cardinality.
    pub orbit_size: usize,
    /// True iff a stabilizer element carries net sign −1 (class vanishes).
    pub is_zero: bool,
    /// True iff no chord joins two positions of one triple (orbit-invariant).
    pub no_loop: bool,
}

/// Applies the adjacent within-triple transposition of positions
/// `(p, p+1)` to an uncolored diagram; returns the image and the sign
/// `sgn(σ) · (−1)^{chord p—p+1 present}`.
pub(crate) fn transpose_plain(d: &LinearChordDiagram, p: usize) -> (LinearChordDiagram, i32) {
    debug_assert!(p % 3 != 2, "transposition must stay within a triple");
    let swap = |x: usize| {
        if x == p {
            p + 1
        } else if x == p + 1 {
            p
        } else {
            x
        }
    };
    let n = 2 * d.degree();
    let mut pairing = vec![0; n];
    for i in 0..n {
        pairing[swap(i)] = swap(d.partner(i));
    }
    let sign = if d.partner(p) == p + 1 { 1 } else { -1 };
    (
        LinearChordDiagram::from_involution(pairing).expect("transposed involution is valid"),
        sign,
    )
}

/// Colored version: arrows transported covariantly; sign is `sgn(σ) = −1`.
fn transpose_colored(d: &ColoredLinearChordDiagram, p: usize) -> (ColoredLinearChordDiagram, i32) {
    let (base, _) = transpose_plain(d.diagram(), p);
    let swap = |x: usize| {
        if x == p {
            p + 1
        } else if x == p + 1 {
            p
        } else {
            x
        }
    };
    let arrows: Vec<(usize, usize)> = d.arrows().iter().map(|&(a, b)| (swap(a), swap(b))).collect();
    (
        ColoredLinearChordDiagram::new(base, arrows).expect("transported arrows match chords"),
        -1,
    )
}

/// Basis and dimension of the degree-`m` signed-orbit quotient.
///
/// Walks every orbit of the within-triple action over all degree-`3m`
/// (colored) diagrams, tracking each diagram's sign relative to its orbit
/// seed; a revisit with a conflicting sign exhibits a −1 stabilizer and
/// kills the class. The basis lists the surviving classes (loop classes
/// additionally dropped for `nl` variants); `dim` is its length. The orbit
/// partition — hence the dimension — does not depend on enumeration order.
pub fn arp_space(m: usize, variant: ArpVariant) -> Result<(Vec<DecoratedGraphClass>, usize)> {
    let cap = degree_cap(DEFAULT_ARP_CAP);
    if m > cap {
        return Err(Error::CapExceeded(format!("quotient degree {m} exceeds cap {cap}")));
    }
    let classes = if variant.colored() {
        orbit_classes_colored(&enumerate_colored_chords_unchecked(3 * m))
    } else {
        orbit_classes_plain(&enumerate_chords_unchecked(3 * m))
    };
    let basis: Vec<DecoratedGraphClass> = classes
        .into_iter()
        .filter(|c| !c.is_zero && (!variant.no_loop() || c.no_loop))
        .collect();
    let dim = basis.len();
    Ok((basis, dim))
}

/// All orbit classes (zero ones included) of the uncolored action.
pub(crate) fn orbit_classes_plain(diagrams: &[LinearChordDiagram]) -> Vec<DecoratedGraphClass> {
    orbit_classes(
        diagrams,
        |d| d.pairing.iter().map(|&x| x as u8).collect(),
        |d| 2 * d.degree(),
        transpose_plain,
        |d| !d.has_within_triple_chord(),
        ClassRep::Plain,
    )
}

/// All orbit classes (zero ones included) of the colored action.
pub(crate) fn orbit_classes_colored(
    diagrams: &[ColoredLinearChordDiagram],
) -> Vec<DecoratedGraphClass> {
    orbit_classes(
        diagrams,
        |d| {
            let mut key: Vec<u8> = d.diagram().pairing.iter().map(|&x| x as u8).collect();
            key.extend(d.arrows().iter().map(|&(a, _)| a as u8));
            key
        },
        |d| 2 * d.degree(),
        transpose_colored,
        |d| !d.diagram().has_within_triple_chord(),
        ClassRep::Colored,
    )
}

/// Shared signed-orbit walk. `positions` gives the position count `6m`;
/// generators are the transpositions `(p, p+1)` with `p ≢ 2 (mod 3)`.
fn orbit_classes<D, K, N, A, L, W>(
    diagrams: &[D],
    key: K,
    positions: N,
    apply: A,
    no_loop: L,
    wrap: W,
) -> Vec<DecoratedGraphClass>
where
    D: Clone + Ord,
    K: Fn(&D) -> Vec<u8>,
    N: Fn(&D) -> usize,
    A: Fn(&D, usize) -> (D, i32),
    L: Fn(&D) -> bool,
    W: Fn(D) -> ClassRep,
{
    let mut visited: HashMap<Vec<u8>, i32> = HashMap::new();
    let mut classes = Vec::new();
    for seed in diagrams {
        if visited.contains_key(&key(seed)) {
            continue;
        }
        let generators: Vec<usize> = (0..positions(seed)).filter(|p| p % 3 != 2).collect();
        let mut queue: Vec<(D, i32)> = vec![(seed.clone(), 1)];
        visited.insert(key(seed), 1);
        let mut orbit_min = seed.clone();
        let mut orbit_size = 1usize;
        let mut is_zero = false;
        while let Some((d, sign)) = queue.pop() {
            for &p in &generators {
                let (image, gen_sign) = apply(&d, p);
                let image_sign = sign * gen_sign;
                match visited.get(&key(&image)) {
                    None => {
                        visited.insert(key(&image), image_sign);
                        if image < orbit_min {
                            orbit_min = image.clone();
                        }
                        orbit_size += 1;
                        queue.push((image, image_sign));
                    }
                    Some(&recorded) => {
                        if recorded != image_sign {
                            is_zero = true;
                        }
                    }
                }
            }
        }
        let no_loop_flag = no_loop(&orbit_min);
        classes.push(DecoratedGraphClass {
            representative: wrap(orbit_min),
            orbit_size,
            is_zero,
            no_loop: no_loop_flag,
        });
    }
    classes
}

// ===== degree-1 orientation-identity audit =====

/// Outcome of [`colored_as_check`].
#[derive(Clone, Debug)]
pub struct ColoredAsReport {
    /// Distinct vertex-reorientation identities at a vertex all of whose
    /// edges are distinct chords (one per coloring of those three chords).
    pub y_identity_count: usize,
    /// Distinct local identities at a vertex carrying a within-triple chord
    /// (loop orientation × remaining-edge orientation, paired by the flip).
    pub loop_identity_count: usize,
    /// True iff the colored within-triple-chord class is zero in the
    /// degree-1 colored quotient.
    pub colored_tadpole_is_zero: bool,
    /// True iff the uncolored within-triple-chord class is zero in the
    /// degree-1 uncolored quotient.
    pub uncolored_tadpole_is_zero: bool,
    /// Human-readable findings, one per line.
    pub details: Vec<String>,
}

impl ColoredAsReport {
    /// True iff every expectation holds: 8 vertex identities, 2 local loop
    /// identities, and both within-triple-chord classes survive.
    pub fn ok(&self) -> bool {
        self.y_identity_count == 8
            && self.loop_identity_count == 2
            && !self.colored_tadpole_is_zero
            && !self.uncolored_tadpole_is_zero
    }
}

/// Audits the degree-1 colored quotient against the orientation identities
/// it is meant to encode, given the colored degree-1 basis from
/// [`arp_space`]`(1, RpCl)`.
///
/// Reversing one vertex orientation is a single within-triple transposition
/// `σ` with sign −1, so each colored diagram `D` yields the identity
/// `D = −σD`. At a vertex whose three edges are distinct chords the eight
/// colorings give eight distinct identities. At a vertex with a
/// within-triple chord, `σ` fixes the pairing and flips only that chord's
/// arrow, so the four local colorings (loop arrow × adjacent chord arrow)
/// collapse to two identities — and none of them forces the class to zero:
/// the colored loop diagram with one arrow equals minus the same diagram
/// with the flipped arrow, but never minus itself. The uncolored loop class
/// survives too, because the transposition's permutation sign −1 cancels
/// against the chord-reversal sign −1.
pub fn colored_as_check(basis: &[DecoratedGraphClass]) -> Result<ColoredAsReport> {
    for class in basis {
        match &class.representative {
            ClassRep::Colored(d) if d.degree() == 3 => {}
            _ => {
                return Err(Error::invalid(
                    "expected the degree-1 colored quotient basis",
                ))
            }
        }
    }
    let mut details = Vec::new();

    // Vertex identities at a fully-crossing matching (all chords join the
    // two triples): reverse the first vertex via the transposition (0 1).
    let theta_like = LinearChordDiagram::from_pairs(3, &[(0, 3), (1, 4), (2, 5)])?;
    let chords = theta_like.chords();
    let mut y_identities: std::collections::BTreeSet<(Vec<u8>, Vec<u8>)> =
        std::collections::BTreeSet::new();
    for mask in 0..1u32 << 3 {
        let arrows: Vec<(usize, usize)> = chords
            .iter()
            .enumerate()
            .map(|(k, &(i, j))| if mask >> k & 1 == 0 { (i, j) } else { (j, i) })
            .collect();
        let d = ColoredLinearChordDiagram::new(theta_like.clone(), arrows)?;
        let (image, sign) = transpose_colored(&d, 0);
        assert_eq!(sign, -1);
        let mut pair = (colored_key(&d), colored_key(&image));
        if pair.1 < pair.0 {
            std::mem::swap(&mut pair.0, &mut pair.1);
        }
        y_identities.insert(pair);
    }
    details.push(format!(
        "vertex reorientation on the crossing matching: {} distinct identities",
        y_identities.len()
    ));

    // Local identities at a within-triple chord: matching {0,1},{2,5},{3,4},
    // transposition (0 1); vary the loop arrow and the bridge arrow while
    // holding the far loop fixed.
    let looped = LinearChordDiagram::from_pairs(3, &[(0, 1), (2, 5), (3, 4)])?;
    let mut loop_identities: std::collections::BTreeSet<(Vec<u8>, Vec<u8>)> =
        std::collections::BTreeSet::new();
    for loop_flip in [false, true] {
        for bridge_flip in [false, true] {
            let arrows = vec![
                if loop_flip { (1, 0) } else { (0, 1) },
                if bridge_flip { (5, 2) } else { (2, 5) },
                (3, 4),
            ];
            let d = ColoredLinearChordDiagram::new(looped.clone(), arrows)?;
            let (image, sign) = transpose_colored(&d, 0);
            assert_eq!(sign, -1);
            assert_eq!(image.diagram(), d.diagram());
            let mut pair = (colored_key(&d), colored_key(&image));
            if pair.1 < pair.0 {
                std::mem::swap(&mut pair.0, &mut pair.1);
            }
            loop_identities.insert(pair);
        }
    }
    details.push(format!(
        "within-triple chord reorientation: {} distinct local identities",
        loop_identities.len()
    ));

    // Survival of the within-triple-chord classes.
    let colored_tadpole_is_zero = !basis.iter().any(|c| !c.no_loop);
    details.push(format!(
        "colored within-triple-chord classes in basis: {}",
        basis.iter().filter(|c| !c.no_loop).count()
    ));
    let (plain_basis, _) = arp_space(1, ArpVariant::Rp)?;
    let uncolored_tadpole_is_zero = !plain_basis.iter().any(|c| !c.no_loop);
    details.push(
        "uncolored within-triple-chord class: permutation sign −1 × reversal sign −1 = +1"
            .to_string(),
    );

    Ok(ColoredAsReport {
        y_identity_count: y_identities.len(),
        loop_identity_count: loop_identities.len(),
        colored_tadpole_is_zero,
        uncolored_tadpole_is_zero,
        details,
    })
}

fn colored_key(d: &ColoredLinearChordDiagram) -> Vec<u8> {
    let mut key: Vec<u8> = d.diagram().pairing.iter().map(|&x| x as u8).collect();
    key.extend(d.arrows().iter().map(|&(a, _)| a as u8));
    key
}
