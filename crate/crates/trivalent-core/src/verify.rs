//! Named verification suites.
//!
//! Each suite re-derives one of the library's advertised guarantees from
//! scratch — dimension tables, oracle equivalences between independent
//! computation routes, identity families on random inputs — and reports a
//! one-line summary on success or a description of the first counterexample
//! on failure. The suites back both the acceptance-test target and the CLI's
//! `selfcheck` verb, so a passing build is one where every suite passes.

use rand::seq::SliceRandom;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::chordspace::{
    arp_space, enumerate_chords, enumerate_colored_chords, ArpVariant, ClassRep,
    LinearChordDiagram,
};
use crate::exact::{kernel_basis, rank_of_rows, Rational, SparseMatrix, SparseVector};
use crate::graphspace::{
    aphi_basis, canonicalize, product, GraphVector, OrientedTrivalentGraph,
};
use crate::groupring::{
    bar_coboundary, cup_product_bar, gamma_pullback, gamma_sign, gamma_tuple, involution_gamma,
    magnus, phi_cochain, phi_n, BarCochain, FormalChain, GroupRingElement, Word,
};
use crate::symplectic::{
    c_theta, c_theta_u, c_theta_u_form, cup_class, det_pairing, eta_minus, eta_plus,
    invariant_subspace_dim, invariant_tensor_gl, project_to_u, wedge3_to_h, wedge3_to_tensor,
    wedge_triples, xi_cup, InvariantSpace, LagrangianOrder, LieFamily, Wedge3Element,
};
use crate::torelli::{
    build_proper_commutator, label_edges, parse_commutator, proper_commutator_check, theta_w_vector,
    CocycleC1, EdgeKind, EdgeSymbol, WeightSystemW,
};
use crate::{Error, Result};

/// The suite names, in execution order.
pub const SUITE_NAMES: [&str; 10] = [
    "criterion_1",
    "criterion_2",
    "criterion_3",
    "criterion_4",
    "criterion_5",
    "criterion_6",
    "criterion_7",
    "criterion_8",
    "criterion_9",
    "criterion_10",
];

/// Runs one suite by name.
pub fn run_suite(name: &str) -> Result<String> {
    match name {
        "criterion_1" => criterion_1(),
        "criterion_2" => criterion_2(),
        "criterion_3" => criterion_3(),
        "criterion_4" => criterion_4(),
        "criterion_5" => criterion_5(),
        "criterion_6" => criterion_6(),
        "criterion_7" => criterion_7(),
        "criterion_8" => criterion_8(),
        "criterion_9" => criterion_9(),
        "criterion_10" => criterion_10(),
        other => Err(Error::invalid(format!(
            "unknown suite {other:?}; known suites: {}",
            SUITE_NAMES.join(", ")
        ))),
    }
}

/// Runs every suite in order, pairing each name with its outcome.
pub fn run_all() -> Vec<(&'static str, Result<String>)> {
    SUITE_NAMES.iter().map(|&name| (name, run_suite(name))).collect()
}

fn fail(msg: impl Into<String>) -> Error {
    Error::verification(msg)
}

/// Chord-diagram counts: `(2m−1)!!` plain diagrams for `m ≤ 6` and
/// `(2m−1)!!·2^m` colored ones for `m ≤ 5`.
pub fn criterion_1() -> Result<String> {
    let mut double_factorial = 1u64;
    for m in 1..=6usize {
        double_factorial *= (2 * m - 1) as u64;
        let got = enumerate_chords(m)?.len() as u64;
        if got != double_factorial {
            return Err(fail(format!(
                "degree {m}: {got} diagrams, expected {double_factorial}"
            )));
        }
        if m <= 5 {
            let want = double_factorial << m;
            let got = enumerate_colored_chords(m)?.len() as u64;
            if got != want {
                return Err(fail(format!(
                    "degree {m}: {got} colored diagrams, expected {want}"
                )));
            }
        }
    }
    Ok("plain counts (2m-1)!! for m <= 6 and colored counts (2m-1)!!*2^m for m <= 5".into())
}

/// The genus-3 invariant-dimension table, exactly: 2 and 6 on `⊗²Λ³H`,
/// 1 and 4 on `⊗²U` (kernel of the Lie-algebra action), and the certified
/// spanning ranks 15 and 120 on `⊗⁶H`, for `sp`/`gl` respectively.
pub fn criterion_2() -> Result<String> {
    let genus = 3;
    let table: [(InvariantSpace, LieFamily, usize); 6] = [
        (InvariantSpace::L3H2, LieFamily::Sp, 2),
        (InvariantSpace::L3H2, LieFamily::Gl, 6),
        (InvariantSpace::U2, LieFamily::Sp, 1),
        (InvariantSpace::U2, LieFamily::Gl, 4),
        (InvariantSpace::H6, LieFamily::Sp, 15),
        (InvariantSpace::H6, LieFamily::Gl, 120),
    ];
    for (space, family, want) in table {
        let got = invariant_subspace_dim(space, family, genus)?;
        if got != want {
            return Err(fail(format!(
                "invariant dimension of {space:?} under {family:?} at genus 3: got {got}, expected {want}"
            )));
        }
    }
    Ok("genus-3 invariant dimensions 2/6 on the wedge square, 1/4 on the U square, \
        certified 15/120 on the sixth tensor power"
        .into())
}

/// The degree-one graph space is one-dimensional, spanned by the theta
/// class; the dumbbell canonicalizes to zero.
pub fn criterion_3() -> Result<String> {
    let (basis, dim) = aphi_basis(1)?;
    if dim != 1 || basis.len() != 1 {
        return Err(fail(format!("degree-one space has dimension {dim}, expected 1")));
    }
    let theta_class = canonicalize(&OrientedTrivalentGraph::theta()).0;
    let v = &basis[0];
    if v.len() != 1 || v.coefficient(&theta_class).is_zero() {
        return Err(fail("degree-one basis vector is not a multiple of the theta class"));
    }
    let (dumbbell, _) = canonicalize(&OrientedTrivalentGraph::dumbbell());
    if !dumbbell.is_zero() {
        return Err(fail("the dumbbell did not canonicalize to zero"));
    }
    Ok("degree-one space is spanned by the theta class; the dumbbell vanishes".into())
}

/// The colored loopless quotient in degree one has dimension 4, and its four
/// class representatives map to linearly independent genus-3 tensors.
pub fn criterion_4() -> Result<String> {
    let (basis, dim) = arp_space(1, ArpVariant::RpNlCl)?;
    if dim != 4 || basis.len() != 4 {
        return Err(fail(format!(
            "colored loopless degree-one quotient has dimension {dim}, expected 4"
        )));
    }
    let mut rows = Vec::with_capacity(4);
    for class in &basis {
        let tensor = match &class.representative {
            ClassRep::Colored(d) => invariant_tensor_gl(d, 3)?,
            ClassRep::Plain(_) => {
                return Err(fail("colored quotient produced an uncolored representative"))
            }
        };
        rows.push(tensor.to_sparse_vector()?);
    }
    let rank = rank_of_rows(rows);
    if rank != 4 {
        return Err(fail(format!(
            "genus-3 tensors of the four classes have rank {rank}, expected 4"
        )));
    }
    Ok("colored loopless degree-one quotient has dimension 4 with independent genus-3 tensors"
        .into())
}

/// Oracle equivalence of the two contraction routes: on 50 random pairs of
/// `U`-elements at genus 3, the full tensor contraction on the `η±`-embedded
/// lifts equals six times the coordinate formula.
pub fn criterion_5() -> Result<String> {
    let genus = 3;
    let mut rng = ChaCha8Rng::seed_from_u64(105);
    for trial in 0..50 {
        let a = project_to_u(&random_wedge(genus, &mut rng))?;
        let b = project_to_u(&random_wedge(genus, &mut rng))?;
        let tensor_route =
            c_theta(&wedge3_to_tensor(&eta_plus(&a)), &wedge3_to_tensor(&eta_minus(&b)))?;
        let coordinate = c_theta_u(&a, &b, LagrangianOrder::PlusMinus)?;
        if tensor_route != &coordinate * &Rational::from(6) {
            return Err(fail(format!(
                "trial {trial}: tensor route {} vs 6 x coordinate {}",
                tensor_route.as_fraction(),
                coordinate.as_fraction()
            )));
        }
    }
    Ok("tensor contraction on embedded lifts equals 6 x the coordinate form on 50 random pairs"
        .into())
}

/// Weight-functional consistency: `W(Θ) = −2` and `W ∘ C = 2 ·` the
/// coordinate cocycle, for both Lagrangian orders, on 50 random pairs.
pub fn criterion_6() -> Result<String> {
    let genus = 3;
    let w = WeightSystemW::new();
    let theta_value = w.eval(&theta_w_vector())?;
    if theta_value != Rational::from(-2) {
        return Err(fail(format!(
            "weight of the theta class is {}, expected -2",
            theta_value.as_fraction()
        )));
    }
    let straight = CocycleC1::new(genus, false)?;
    let swapped = CocycleC1::new(genus, true)?;
    let mut rng = ChaCha8Rng::seed_from_u64(106);
    for trial in 0..50 {
        let a = random_wedge(genus, &mut rng);
        let b = random_wedge(genus, &mut rng);
        for c in [&straight, &swapped] {
            let lhs = w.eval(&c.eval(&a, &b)?)?;
            let rhs = &Rational::from(2) * &c_theta_u(&a, &b, c.order())?;
            if lhs != rhs {
                return Err(fail(format!(
                    "trial {trial} (swapped = {}): W after the cocycle gave {}, expected {}",
                    c.swapped(),
                    lhs.as_fraction(),
                    rhs.as_fraction()
                )));
            }
        }
    }
    Ok("W(theta) = -2 and W after the cocycle is twice the coordinate form on 50 random pairs"
        .into())
}

/// Cohomology-level facts: the antisymmetrized scalar form is nonzero at
/// genus 3, the two Lagrangian orders have equal antisymmetrizations, and
/// the cup witness `(ξ⁺∪ξ⁻)(u∧v) = ⟨u,v⟩` holds on Lagrangian wedge bases.
pub fn criterion_7() -> Result<String> {
    let genus = 3;
    let plus = cup_class(&c_theta_u_form(genus, LagrangianOrder::PlusMinus)?);
    let minus = cup_class(&c_theta_u_form(genus, LagrangianOrder::MinusPlus)?);
    if plus.iter().all(|row| row.iter().all(Rational::is_zero)) {
        return Err(fail("antisymmetrized scalar form vanished at genus 3"));
    }
    if plus != minus {
        return Err(fail("the two Lagrangian orders gave different antisymmetrizations"));
    }
    for g in [3usize, 4] {
        let gg = g as u16;
        let mut x_triples = Vec::new();
        let mut y_triples = Vec::new();
        for i in 0..gg {
            for j in (i + 1)..gg {
                for k in (j + 1)..gg {
                    x_triples.push([i, j, k]);
                    y_triples.push([i + gg, j + gg, k + gg]);
                }
            }
        }
        for &[i, j, k] in &x_triples {
            let u = Wedge3Element::wedge(g, i, j, k)?;
            for &[p, q, r] in &y_triples {
                let v = Wedge3Element::wedge(g, p, q, r)?;
                if xi_cup(&u, &v) != det_pairing(&u, &v) {
                    return Err(fail(format!(
                        "cup witness failed at genus {g} on x{i}{j}{k} against y-indices {p}{q}{r}"
                    )));
                }
            }
        }
    }
    Ok("antisymmetrization nonzero, order-independent, and the cup witness matches the \
        determinant pairing"
        .into())
}

/// The group-ring identity suite: the commutator difference identity exactly
/// on 100 random pairs, the coboundary ladder of the `φ_n` cochains modulo
/// `I^{n+2}`, leading terms of bracket words modulo `I^{n+1}`, the inversion
/// chain map, and the graded cup sign.
pub fn criterion_8() -> Result<String> {
    let mut rng = ChaCha8Rng::seed_from_u64(108);

    // Commutator difference: 1 − [g,h] = ((1−h)(1−g) − (1−g)(1−h))·g⁻¹h⁻¹.
    for trial in 0..100 {
        let g = random_word(&mut rng, 3, 6);
        let h = random_word(&mut rng, 3, 6);
        let lhs = GroupRingElement::one_minus(&Word::commutator(&g, &h));
        let ug = GroupRingElement::one_minus(&g);
        let uh = GroupRingElement::one_minus(&h);
        let tail = GroupRingElement::from_word(g.inverse().mul(&h.inverse()));
        let rhs = &(&(&uh * &ug) - &(&ug * &uh)) * &tail;
        if lhs != rhs {
            return Err(fail(format!(
                "commutator difference identity failed at trial {trial} on g = {g}, h = {h}"
            )));
        }
    }

    // Coboundary ladder: δφ_n = φ_{n+1} for odd n, 0 for even n, mod I^{n+2}.
    for n in 1..=4usize {
        let phi = phi_cochain(n);
        let delta = bar_coboundary(&phi);
        for trial in 0..50 {
            let tuple: Vec<Word> = (0..=n).map(|_| random_word(&mut rng, 3, 4)).collect();
            let mut diff = delta.eval(&tuple);
            if n % 2 == 1 {
                diff = &diff - &phi_n(&tuple);
            }
            if !magnus(&diff, n + 1).in_ideal_power(n + 2) {
                return Err(fail(format!(
                    "coboundary ladder failed at arity {n}, trial {trial}"
                )));
            }
        }
    }

    // Leading terms: 1 − c ≡ L(c) mod I^{n+1} for weight-n bracket words,
    // left- and right-normed, n = 2, 3, 4.
    for n in 2..=4usize {
        for trial in 0..10 {
            let words: Vec<Word> = (0..n).map(|_| random_word(&mut rng, 3, 3)).collect();
            for left_normed in [true, false] {
                let (word, leading) = normed_bracket(&words, left_normed);
                let diff = &GroupRingElement::one_minus(&word) - &leading;
                if !magnus(&diff, n).in_ideal_power(n + 1) {
                    return Err(fail(format!(
                        "leading-term congruence failed at weight {n}, trial {trial}, \
                         left_normed = {left_normed}"
                    )));
                }
            }
        }
    }

    // Inversion is a chain map on formal chains of simplex degrees 2..4.
    for n in 2..=4usize {
        for trial in 0..8 {
            let mut chain = FormalChain::zero();
            for _ in 0..3 {
                let tuple: Vec<Word> = (0..n).map(|_| random_word(&mut rng, 3, 3)).collect();
                chain.add_term(tuple, Rational::from(rng.random_range(-2i64..=2)));
            }
            let route_a = involution_gamma(&chain.boundary());
            let route_b = involution_gamma(&chain).boundary();
            if route_a != route_b {
                return Err(fail(format!(
                    "inversion failed to commute with the boundary at degree {n}, trial {trial}"
                )));
            }
        }
    }

    // Graded cup sign on scalar-valued cochains:
    // γ♯(ξ∪η) = (−1)^{nm} (γ♯η) ∪ (γ♯ξ).
    for (n, m) in [(1usize, 1usize), (1, 2), (2, 1), (2, 2)] {
        let xi = functional_cochain(n, 3);
        let eta = functional_cochain(m, 5);
        let lhs = gamma_pullback(&cup_product_bar(&xi, &eta));
        let rhs = cup_product_bar(&gamma_pullback(&eta), &gamma_pullback(&xi));
        let sign = if (n * m) % 2 == 0 { Rational::one() } else { -Rational::one() };
        for trial in 0..10 {
            let tuple: Vec<Word> = (0..n + m).map(|_| random_word(&mut rng, 3, 3)).collect();
            if lhs.eval(&tuple) != &sign * &rhs.eval(&tuple) {
                return Err(fail(format!(
                    "cup sign failed at bidegree ({n}, {m}), trial {trial}"
                )));
            }
        }
    }

    // Spot-check the sign sequence of the involution itself.
    let expected_signs = [-1, -1, 1, 1, -1];
    for (n, want) in (1..=5).zip(expected_signs) {
        if gamma_sign(n) != want {
            return Err(fail(format!("involution sign at degree {n} is not {want}")));
        }
        let tuple: Vec<Word> = (0..n).map(|_| random_word(&mut rng, 2, 2)).collect();
        let (rev, sign) = gamma_tuple(&tuple);
        if sign != want || rev.len() != n {
            return Err(fail(format!("involution tuple data wrong at degree {n}")));
        }
    }

    Ok("commutator difference on 100 pairs, coboundary ladder, leading terms, inversion \
        chain map, and cup signs all hold"
        .into())
}

/// Labeling combinatorics: every diagram of degree ≤ 3 sees all three labels
/// at every vertex; the degree-one bracket word has exactly one proper
/// monomial; the greedy construction certifies every degree-2 diagram.
pub fn criterion_9() -> Result<String> {
    for m in 1..=3usize {
        for d in enumerate_chords(m)? {
            let labeled = label_edges(&d)?;
            for p in 0..2 * m {
                let [a, b, c] = labeled.incident_symbols(p);
                if a.kind != EdgeKind::A || b.kind != EdgeKind::B || c.kind != EdgeKind::C {
                    return Err(fail(format!(
                        "vertex {p} of a degree-{m} diagram is missing a label"
                    )));
                }
            }
        }
    }

    let single = LinearChordDiagram::from_pairs(1, &[(0, 1)])?;
    let labeled = label_edges(&single)?;
    let tree = parse_commutator("[[a1,b1],c1]")?
        .try_map(&mut |s: &String| s.parse::<EdgeSymbol>())?;
    let report = proper_commutator_check(&labeled, &tree)?;
    if report.monomial_count != 4 || !report.ok() {
        return Err(fail(format!(
            "degree-one bracket word has {} proper monomials out of {}, expected exactly 1 of 4",
            report.proper_count, report.monomial_count
        )));
    }

    for d in enumerate_chords(2)? {
        let labeled = label_edges(&d)?;
        let tree = build_proper_commutator(&labeled)?;
        let report = proper_commutator_check(&labeled, &tree)?;
        if !report.ok() {
            return Err(fail(format!(
                "greedy certificate failed on the degree-2 diagram {:?}",
                d.chords()
            )));
        }
    }

    Ok("labels complete for degree <= 3; unique proper monomials certified in degrees 1 and 2"
        .into())
}

/// Property umbrella: loop graphs die under antisymmetry; canonical forms
/// are invariant under 200 random relabelings; the graded product is
/// commutative and associative; the `U`-projection is idempotent with the
/// expected kernel dimension of the contraction.
pub fn criterion_10() -> Result<String> {
    let mut rng = ChaCha8Rng::seed_from_u64(110);

    // Loop graphs vanish: force a within-triple pair.
    for m in 1..=3usize {
        for _ in 0..12 {
            let g = random_graph_with_loop(m, &mut rng);
            let (c, _) = canonicalize(&g);
            if !c.is_zero() {
                return Err(fail(format!("a degree-{m} graph with a loop did not vanish")));
            }
        }
    }

    // Canonical form and sign are invariant under orientation-preserving
    // dart relabelings.
    let mut checked = 0usize;
    'outer: for round in 0..200usize {
        let m = round % 3 + 1;
        let g = random_graph(m, &mut rng);
        let mut perm: Vec<usize> = (0..6 * m).collect();
        perm.shuffle(&mut rng);
        let relabeled = g.relabel(&perm)?;
        if canonicalize(&g) != canonicalize(&relabeled) {
            return Err(fail(format!("canonical form changed under a relabeling (round {round})")));
        }
        checked += 1;
        if checked >= 200 {
            break 'outer;
        }
    }

    // Product: unital, commutative, associative on sample vectors.
    let theta = theta_w_vector();
    let unit = GraphVector::from_graph(
        canonicalize(&OrientedTrivalentGraph::empty()).0,
        Rational::one(),
    );
    let (deg2, _) = aphi_basis(2)?;
    if product(&unit, &theta) != theta {
        return Err(fail("the empty graph is not a unit for the product"));
    }
    for v in &deg2 {
        if product(&theta, v) != product(v, &theta) {
            return Err(fail("product is not commutative"));
        }
    }
    let left = product(&product(&theta, &theta), &deg2[0]);
    let right = product(&theta, &product(&theta, &deg2[0]));
    if left != right {
        return Err(fail("product is not associative"));
    }

    // U-projection: idempotent, lands in the kernel of the contraction, and
    // that kernel has dimension C(2g,3) − 2g.
    for g in [2usize, 3] {
        let triples = wedge_triples(g);
        let expected = triples.len() - 2 * g;
        let mut rows: Vec<SparseVector> = vec![SparseVector::new(); 2 * g];
        for (idx, &[a, b, c]) in triples.iter().enumerate() {
            let w = Wedge3Element::wedge(g, a, b, c)?;
            for (key, v) in wedge3_to_h(&w).entries() {
                rows[key[0] as usize].add_to(idx, v);
            }
        }
        let kernel = kernel_basis(&SparseMatrix::from_rows(triples.len(), rows));
        if kernel.len() != expected {
            return Err(fail(format!(
                "contraction kernel at genus {g} has dimension {}, expected {expected}",
                kernel.len()
            )));
        }
        for _ in 0..10 {
            let w = random_wedge(g, &mut rng);
            let once = project_to_u(&w)?;
            let twice = project_to_u(&once)?;
            if once != twice {
                return Err(fail(format!("projection is not idempotent at genus {g}")));
            }
            if !wedge3_to_h(&once).is_zero() {
                return Err(fail(format!(
                    "projection image does not lie in the contraction kernel at genus {g}"
                )));
            }
        }
    }

    Ok("loops vanish, canonical forms are relabeling-invariant, the product is \
        commutative and associative, and the U-projection behaves"
        .into())
}

// ---------------------------------------------------------------------------
// Shared random generators and small helpers
// ---------------------------------------------------------------------------

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

fn random_word(rng: &mut ChaCha8Rng, generators: i32, max_len: usize) -> Word {
    let len = rng.random_range(1..=max_len);
    let letters: Vec<i32> = (0..len)
        .map(|_| {
            let g = rng.random_range(1..=generators);
            if rng.random_range(0..2) == 0 {
                g
            } else {
                -g
            }
        })
        .collect();
    Word::from_letters(&letters).expect("letters are nonzero")
}

/// A left- or right-normed bracket word on the given letters, with its
/// leading term `L` (`L(leaf) = 1 − w`, `L([u,v]) = −(L(u)L(v) − L(v)L(u))`).
fn normed_bracket(words: &[Word], left_normed: bool) -> (Word, GroupRingElement) {
    let bracket_step = |(cw, cl): (Word, GroupRingElement), w: &Word| {
        let l = GroupRingElement::one_minus(w);
        let next_l = -&(&(&cl * &l) - &(&l * &cl));
        (Word::commutator(&cw, w), next_l)
    };
    let bracket_step_rev = |(cw, cl): (Word, GroupRingElement), w: &Word| {
        let l = GroupRingElement::one_minus(w);
        let next_l = -&(&(&l * &cl) - &(&cl * &l));
        (Word::commutator(w, &cw), next_l)
    };
    if left_normed {
        let init = (words[0].clone(), GroupRingElement::one_minus(&words[0]));
        words[1..].iter().fold(init, bracket_step)
    } else {
        let last = words.len() - 1;
        let init = (words[last].clone(), GroupRingElement::one_minus(&words[last]));
        words[..last].iter().rev().fold(init, bracket_step_rev)
    }
}

/// A deterministic scalar-valued bar cochain of the given arity: the product
/// over slots of an affine letter functional, offset by `salt` so different
/// cochains are genuinely different.
fn functional_cochain(arity: usize, salt: i64) -> BarCochain<Rational> {
    BarCochain::new(arity, move |words: &[Word]| {
        let mut value = Rational::one();
        for (slot, w) in words.iter().enumerate() {
            let mut f = Rational::from(salt + slot as i64);
            for (pos, &letter) in w.letters().iter().enumerate() {
                f += &Rational::from((pos as i64 + 1) * i64::from(letter));
            }
            value = &value * &f;
        }
        value
    })
}

/// A uniformly random fixed-point-free pairing on the `6m` darts of the
/// standard triples `[3j, 3j+1, 3j+2]`.
fn random_graph(m: usize, rng: &mut ChaCha8Rng) -> OrientedTrivalentGraph {
    let mut darts: Vec<usize> = (0..6 * m).collect();
    darts.shuffle(rng);
    graph_from_matched(m, &darts)
}

/// As [`random_graph`], but darts `0` and `1` (two legs of vertex 0) are
/// forced to pair, producing a loop.
fn random_graph_with_loop(m: usize, rng: &mut ChaCha8Rng) -> OrientedTrivalentGraph {
    let mut rest: Vec<usize> = (2..6 * m).collect();
    rest.shuffle(rng);
    let mut darts = vec![0, 1];
    darts.extend(rest);
    graph_from_matched(m, &darts)
}

fn graph_from_matched(m: usize, darts: &[usize]) -> OrientedTrivalentGraph {
    let mut pairing = vec![0usize; 6 * m];
    for pair in darts.chunks_exact(2) {
        pairing[pair[0]] = pair[1];
        pairing[pair[1]] = pair[0];
    }
    let triples: Vec<[usize; 3]> = (0..2 * m).map(|j| [3 * j, 3 * j + 1, 3 * j + 2]).collect();
    OrientedTrivalentGraph::new(triples, pairing).expect("pairing is a fixed-point-free involution")
}
