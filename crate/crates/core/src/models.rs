//! Built-in models and seeded random generators of PL elements and
//! representations.
//!
//! `geodesic_genus2` lifts the regular-octagon Fuchsian group (four
//! hyperbolic translations through the disk center at angles k*pi/4 with
//! cosh(l/2) = 1 + sqrt(2)); `triangle_237` lifts the (2,3,7) rotation
//! group. Both carry the central generator `z -> T_1`. The PL backend
//! samples each lift on a uniform grid, which keeps commutation with `T_1`
//! exact while relators hold only to the declared sampling tolerance.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::element::LineElement;
use crate::moebius::{Mat2, MoebiusLift};
use crate::plz::{Orientation, PlMap};
use crate::rat::{self, Rat};
use crate::real;
use crate::reps::{RepError, Representation};
use crate::words::{parse_word, Word};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Backend {
    Pl { grid: usize },
    Moebius,
}

impl Backend {
    pub fn default_pl() -> Self {
        Backend::Pl { grid: 64 }
    }
}

#[derive(Clone, Debug)]
pub enum ModelError {
    UnknownModel(String),
    GenerationFailed { seed: u64, attempts: u32 },
    Rep(RepError),
}

impl From<RepError> for ModelError {
    fn from(e: RepError) -> Self {
        ModelError::Rep(e)
    }
}

impl core::fmt::Display for ModelError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            ModelError::UnknownModel(n) => write!(f, "unknown builtin model `{n}`"),
            ModelError::GenerationFailed { seed, attempts } => {
                write!(f, "no validating random model found (seed {seed}, {attempts} attempts)")
            }
            ModelError::Rep(e) => write!(f, "{e}"),
        }
    }
}

impl core::error::Error for ModelError {}

/// Dispatch by name: `geodesic_genus2`, `triangle_237`, or `random_pl(k)`.
pub fn builtin(name: &str, backend: Backend, seed: u64) -> Result<Representation, ModelError> {
    match name {
        "geodesic_genus2" => Ok(geodesic_genus2(backend)),
        "triangle_237" => Ok(triangle_237(backend)),
        _ => {
            if let Some(rest) = name.strip_prefix("random_pl(") {
                if let Some(k) = rest.strip_suffix(')') {
                    if let Ok(k) = k.trim().parse::<usize>() {
                        return random_pl(k, seed);
                    }
                }
            }
            Err(ModelError::UnknownModel(name.to_string()))
        }
    }
}

fn mat_mul(a: &Mat2, b: &Mat2) -> Mat2 {
    [
        [
            a[0][0] * b[0][0] + a[0][1] * b[1][0],
            a[0][0] * b[0][1] + a[0][1] * b[1][1],
        ],
        [
            a[1][0] * b[0][0] + a[1][1] * b[1][0],
            a[1][0] * b[0][1] + a[1][1] * b[1][1],
        ],
    ]
}

fn mat_inv(m: &Mat2) -> Mat2 {
    [[m[1][1], -m[0][1]], [-m[1][0], m[0][0]]]
}

/// Rotation by `theta` about the hyperbolic-plane point fixed by `SO(2)`.
fn rotation(theta: f64) -> Mat2 {
    let (c, s) = (real::cos(theta / 2.0), real::sin(theta / 2.0));
    [[c, s], [-s, c]]
}

/// Translation of length `l` along the geodesic with endpoints -1 and 1.
fn axis_translation(l: f64) -> Mat2 {
    let (c, s) = (real::cosh(l / 2.0), real::sinh(l / 2.0));
    [[c, s], [s, c]]
}

/// Rotation by `theta` about the upper-half-plane point `u + iv`.
fn rotation_about(u: f64, v: f64, theta: f64) -> Mat2 {
    let sv = real::sqrt(v);
    let to = [[sv, u / sv], [0.0, 1.0 / sv]];
    mat_mul(&mat_mul(&to, &rotation(theta)), &mat_inv(&to))
}

fn acosh(x: f64) -> f64 {
    real::ln(x + real::sqrt(x * x - 1.0))
}

/// Orientation-preserving PL sample of a lift, exact dyadic breakpoints.
fn pl_sample(lift: &MoebiusLift, grid: usize) -> PlMap {
    lift.pl_approximation(grid).0
}

fn gens_to_rep(
    gens: Vec<(String, MoebiusLift)>,
    relators: Vec<Word>,
    backend: Backend,
    moebius_tol: f64,
) -> Representation {
    match backend {
        Backend::Moebius => {
            let mut out: Vec<(String, LineElement)> = gens
                .into_iter()
                .map(|(n, m)| (n, LineElement::Moebius(m)))
                .collect();
            out.push(("z".to_string(), LineElement::Moebius(MoebiusLift::translation(1))));
            let rep = Representation::new(
                out,
                relators,
                LineElement::Moebius(MoebiusLift::translation(1)),
                Some("z".to_string()),
                moebius_tol,
            )
            .expect("builtin model construction");
            rep
        }
        Backend::Pl { grid } => {
            let mut out: Vec<(String, LineElement)> = gens
                .into_iter()
                .map(|(n, m)| (n, LineElement::Pl(pl_sample(&m, grid))))
                .collect();
            out.push((
                "z".to_string(),
                LineElement::Pl(PlMap::translation(rat::one())),
            ));
            let rep = Representation::new(
                out,
                relators,
                LineElement::Pl(PlMap::translation(rat::one())),
                Some("z".to_string()),
                0.0,
            )
            .expect("builtin model construction");
            // Declare the measured relator defect (sampling error) plus slack.
            let mut worst: f64 = 0.0;
            for r in rep.relators() {
                let e = rep.eval_word(r).expect("relator evaluates");
                let d = e
                    .grid_defect(&rep.identity(), 64)
                    .expect("defect computes");
                worst = real::max(worst, d);
            }
            let tol = 2.0 * worst + 1e-9;
            Representation::new(
                rep.generators().to_vec(),
                rep.relators().to_vec(),
                rep.tau().clone(),
                rep.center_name().map(|s| s.to_string()),
                tol,
            )
            .expect("builtin model construction")
        }
    }
}

/// Lifted boundary action of the regular-octagon genus-2 surface group,
/// with the fiber generator `z -> T_1`. The octagon side-pairing word times
/// the central correction `z^2` is the relator.
pub fn geodesic_genus2(backend: Backend) -> Representation {
    let l = 2.0 * acosh(1.0 + real::sqrt(2.0));
    let names = ["a1", "b1", "a2", "b2"];
    let mut gens = Vec::new();
    for (k, name) in names.iter().enumerate() {
        let r = rotation(k as f64 * core::f64::consts::PI / 4.0);
        let m = mat_mul(&mat_mul(&r, &axis_translation(l)), &mat_inv(&r));
        let lift = MoebiusLift::axis_normalized(m).expect("octagon generators are hyperbolic");
        gens.push((name.to_string(), lift));
    }
    let relator = parse_word("a1 b1^-1 a2 b2^-1 a1^-1 b1 a2^-1 b2 z^2").unwrap();
    gens_to_rep(gens, vec![relator], backend, 1e-9)
}

/// Lifted (2,3,7) triangle rotation group with `z -> T_1`. Relators are the
/// lifted torsion relations with their central corrections, computed at
/// construction.
pub fn triangle_237(backend: Backend) -> Representation {
    let (p, q, r) = (2.0f64, 3.0f64, 7.0f64);
    let (alpha, beta, gamma) = (
        core::f64::consts::PI / p,
        core::f64::consts::PI / q,
        core::f64::consts::PI / r,
    );
    // Hyperbolic law of cosines: side AB is opposite the vertex C.
    let ab = acosh((real::cos(alpha) * real::cos(beta) + real::cos(gamma))
        / (real::sin(alpha) * real::sin(beta)));
    let ac = acosh((real::cos(alpha) * real::cos(gamma) + real::cos(beta))
        / (real::sin(alpha) * real::sin(gamma)));
    // A at i, B up the imaginary axis, C on the unit semicircle through i.
    let a_pt = (0.0, 1.0);
    let b_pt = (0.0, real::exp(ab));
    let c_of = |dir: f64| {
        let t = axis_translation(dir * ac);
        // Image of i under the axis translation.
        let (cc, ss) = (t[0][0], t[0][1]);
        let den = ss * ss + cc * cc;
        ((2.0 * cc * ss) / den, 1.0 / den)
    };
    // Pick signs so the three rotations compose to +-identity.
    for dir in [1.0, -1.0] {
        let c_pt = c_of(dir);
        for s1 in [1.0f64, -1.0] {
            for s2 in [1.0f64, -1.0] {
                for s3 in [1.0f64, -1.0] {
                    let x = rotation_about(a_pt.0, a_pt.1, s1 * 2.0 * core::f64::consts::PI / p);
                    let y = rotation_about(b_pt.0, b_pt.1, s2 * 2.0 * core::f64::consts::PI / q);
                    let w = rotation_about(c_pt.0, c_pt.1, s3 * 2.0 * core::f64::consts::PI / r);
                    let prod = mat_mul(&mat_mul(&x, &y), &w);
                    let dev_plus = (prod[0][0] - 1.0).abs()
                        + prod[0][1].abs()
                        + prod[1][0].abs()
                        + (prod[1][1] - 1.0).abs();
                    let dev_minus = (prod[0][0] + 1.0).abs()
                        + prod[0][1].abs()
                        + prod[1][0].abs()
                        + (prod[1][1] + 1.0).abs();
                    if real::min(dev_plus, dev_minus) < 1e-6 {
                        let gens = vec![
                            ("x".to_string(), MoebiusLift::new(x, 0).unwrap()),
                            ("y".to_string(), MoebiusLift::new(y, 0).unwrap()),
                            ("w".to_string(), MoebiusLift::new(w, 0).unwrap()),
                        ];
                        let relators = triangle_relators(&gens);
                        return gens_to_rep(gens, relators, backend, 1e-9);
                    }
                }
            }
        }
    }
    unreachable!("one sign assignment closes the (2,3,7) triangle relation")
}

/// Lifted torsion relators `x^2 z^-k1`, `y^3 z^-k2`, `x y w z^-k3` with the
/// integer corrections measured from the lifts.
fn triangle_relators(gens: &[(String, MoebiusLift)]) -> Vec<Word> {
    let displacement = |word: &[(usize, i64)]| -> i64 {
        let mut e = MoebiusLift::identity();
        for (i, exp) in word {
            let g = if *exp > 0 {
                gens[*i].1
            } else {
                gens[*i].1.invert()
            };
            for _ in 0..exp.unsigned_abs() {
                e = e.compose(&g);
            }
        }
        let d = e.eval(0.0);
        real::round(d) as i64
    };
    let k1 = displacement(&[(0, 2)]);
    let k2 = displacement(&[(1, 3)]);
    let k3 = displacement(&[(0, 1), (1, 1), (2, 1)]);
    vec![
        parse_word(&format!("x^2 z^{}", -k1)).unwrap(),
        parse_word(&format!("y^3 z^{}", -k2)).unwrap(),
        parse_word(&format!("x y w z^{}", -k3)).unwrap(),
    ]
}

/// Deterministic per-case stream for seeded suites: one independent rng per
/// (seed, case index).
pub fn suite_rng(seed: u64, index: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed ^ index.wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

/// Draws a rational with denominator `2^16`.
pub fn random_rat(rng: &mut ChaCha8Rng) -> Rat {
    rat::rat(rng.gen_range(0..65536u32) as i64, 65536)
}

/// A hyperbolic-like PL map with repelling point `p`, attracting point `q`
/// and contraction factor `c` (0 < c < 1) near the fixed points.
pub fn hyperbolic_pl_map(p: &Rat, q: &Rat, c: &Rat) -> PlMap {
    assert!(rat::frac(p) != rat::frac(q), "fixed points must differ mod 1");
    let p = rat::frac(p);
    let q_up = if rat::frac(q) > p {
        rat::frac(q)
    } else {
        rat::frac(q) + rat::one()
    };
    let two = rat::rat_int(2);
    let m1 = (&p + &q_up) / &two;
    let f1 = &q_up - c * (&q_up - &m1);
    let m2 = (&q_up + &p + rat::one()) / &two;
    let f2 = &q_up + c * (&m2 - &q_up);
    let mut pts = vec![(p.clone(), p.clone()), (m1, f1), (q_up.clone(), q_up.clone()), (m2, f2)];
    for pt in &mut pts {
        let shift = pt.0.floor();
        pt.0 = &pt.0 - &shift;
        pt.1 = &pt.1 - &shift;
    }
    pts.sort_by(|a, b| a.0.cmp(&b.0));
    PlMap::new(pts, Orientation::Preserving).expect("construction is monotone")
}

/// Draws distinct circle points with pairwise gaps at least `1/16`.
pub fn random_separated_points(rng: &mut ChaCha8Rng, n: usize) -> Vec<Rat> {
    loop {
        let mut pts: Vec<Rat> = (0..n).map(|_| random_rat(rng)).collect();
        pts.sort();
        let min_gap = rat::rat(1, 16);
        let ok = (0..pts.len()).all(|i| {
            let next = if i + 1 < pts.len() {
                pts[i + 1].clone()
            } else {
                &pts[0] + rat::one()
            };
            next - &pts[i] >= min_gap
        });
        if ok {
            return pts;
        }
    }
}

/// A random hyperbolic-like PL map with well-separated fixed points and
/// strong contraction.
pub fn random_hyperbolic_pl(rng: &mut ChaCha8Rng) -> PlMap {
    let pts = random_separated_points(rng, 2);
    let c = rat::rat(1, 8);
    if rng.gen_bool(0.5) {
        hyperbolic_pl_map(&pts[0], &pts[1], &c)
    } else {
        hyperbolic_pl_map(&pts[1], &pts[0], &c)
    }
}

/// Which of the four unlinked consecutive-point patterns to realize, read as
/// (is `a_+` left of `a_-`, is `b_+` left of `b_-`) within the two blocks.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct UnlinkedKinds {
    pub a_plus_first: bool,
    pub b_plus_first: bool,
}

impl UnlinkedKinds {
    /// The pattern of the unlinked-ordering lemma: a+ a- b- b+.
    pub fn lemma_pattern() -> Self {
        UnlinkedKinds {
            a_plus_first: true,
            b_plus_first: false,
        }
    }

    /// Its image under inverting both maps: a- a+ b+ b-.
    pub fn lemma_pattern_inverse() -> Self {
        UnlinkedKinds {
            a_plus_first: false,
            b_plus_first: true,
        }
    }
}

/// A random unlinked hyperbolic-like pair realizing the requested pattern:
/// `a` owns the first two of four separated circle points, `b` the last two.
pub fn random_unlinked_pair(rng: &mut ChaCha8Rng, kinds: UnlinkedKinds) -> (PlMap, PlMap) {
    let pts = random_separated_points(rng, 4);
    let c = rat::rat(1, 8);
    let a = if kinds.a_plus_first {
        hyperbolic_pl_map(&pts[1], &pts[0], &c)
    } else {
        hyperbolic_pl_map(&pts[0], &pts[1], &c)
    };
    let b = if kinds.b_plus_first {
        hyperbolic_pl_map(&pts[3], &pts[2], &c)
    } else {
        hyperbolic_pl_map(&pts[2], &pts[3], &c)
    };
    (a, b)
}

/// A random linked hyperbolic-like pair: fixed sets strictly interleave.
pub fn random_linked_pair(rng: &mut ChaCha8Rng) -> (PlMap, PlMap) {
    let pts = random_separated_points(rng, 4);
    let c = rat::rat(1, 8);
    let a = if rng.gen_bool(0.5) {
        hyperbolic_pl_map(&pts[0], &pts[2], &c)
    } else {
        hyperbolic_pl_map(&pts[2], &pts[0], &c)
    };
    let b = if rng.gen_bool(0.5) {
        hyperbolic_pl_map(&pts[1], &pts[3], &c)
    } else {
        hyperbolic_pl_map(&pts[3], &pts[1], &c)
    };
    (a, b)
}

/// A random PL homeomorphism commuting with `T_1` (not necessarily with
/// fixed points); used as a conjugator.
pub fn random_pl_conjugator(rng: &mut ChaCha8Rng, n_pts: usize) -> PlMap {
    let n = n_pts.max(1);
    let mut xs: Vec<Rat> = Vec::new();
    while xs.len() < n {
        let x = random_rat(rng);
        if !xs.contains(&x) {
            xs.push(x);
        }
    }
    xs.sort();
    let y0 = random_rat(rng);
    let weights: Vec<i64> = (0..n).map(|_| rng.gen_range(1..65536i64)).collect();
    let total: i64 = weights.iter().sum();
    let mut acc = 0i64;
    let mut pts = Vec::with_capacity(n);
    for (i, x) in xs.into_iter().enumerate() {
        pts.push((x, &y0 + rat::rat(acc, total)));
        acc += weights[i];
    }
    PlMap::new(pts, Orientation::Preserving).expect("strictly increasing by construction")
}

/// A random orientation-reversing PL map (a reflection composed with a
/// random homeomorphism), so that its square is nontrivial.
pub fn random_reversing_pl(rng: &mut ChaCha8Rng) -> PlMap {
    let c = random_rat(rng);
    let h = random_pl_conjugator(rng, 3);
    PlMap::reflection(c).compose(&h)
}

/// `k` seeded ping-pong PL generators plus one orientation-reversing
/// generator `r` built as `g . s` with `s` the reflection fixing a point `p`
/// and `g` hyperbolic-like attracting at `p` (so `r` fixes `p` and `r^2` is
/// hyperbolic at it). Validated at word length 4 with deterministic retry.
pub fn random_nonorientable(k: usize, seed: u64) -> Result<Representation, ModelError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let attempts = 256;
    for _ in 0..attempts {
        let mut gens = Vec::with_capacity(k + 1);
        for i in 0..k {
            let name = format!("g{i}");
            gens.push((name, LineElement::Pl(random_hyperbolic_pl(&mut rng))));
        }
        let pts = random_separated_points(&mut rng, 2);
        let (p, q) = (&pts[0], &pts[1]);
        let g = hyperbolic_pl_map(q, p, &rat::rat(1, 8));
        let s = PlMap::reflection(p * rat::rat_int(2));
        let r = g.compose(&s);
        gens.push(("r".to_string(), LineElement::Pl(r)));
        let rep = Representation::new(
            gens,
            vec![],
            LineElement::Pl(PlMap::translation(rat::one())),
            None,
            0.0,
        )?;
        if rep.validate(4).is_ok() {
            return Ok(rep);
        }
    }
    Err(ModelError::GenerationFailed { seed, attempts })
}

/// `k` seeded ping-pong PL generators passing hyperbolic-like validation at
/// word length 4; retries deterministically on validation failure.
pub fn random_pl(k: usize, seed: u64) -> Result<Representation, ModelError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let attempts = 64;
    for _ in 0..attempts {
        let mut gens = Vec::with_capacity(k);
        for i in 0..k {
            let name = format!("g{i}");
            gens.push((name, LineElement::Pl(random_hyperbolic_pl(&mut rng))));
        }
        let rep = Representation::new(
            gens,
            vec![],
            LineElement::Pl(PlMap::translation(rat::one())),
            None,
            0.0,
        )?;
        if rep.validate(4).is_ok() {
            return Ok(rep);
        }
    }
    Err(ModelError::GenerationFailed { seed, attempts })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::element::ElementClass;
    use crate::reps::compare_spectra;

    #[test]
    fn octagon_relator_with_central_correction_is_identity() {
        let rep = geodesic_genus2(Backend::Moebius);
        let r = rep.eval_word(&rep.relators()[0]).unwrap();
        let defect = r.grid_defect(&rep.identity(), 128).unwrap();
        assert!(defect < 1e-9, "relator defect {defect:e}");
        rep.validate(2).unwrap();
    }

    #[test]
    fn octagon_generators_are_hyperbolic_like() {
        let rep = geodesic_genus2(Backend::Moebius);
        for name in ["a1", "b1", "a2", "b2"] {
            let g = rep.generator(name).unwrap();
            assert_eq!(g.classify().unwrap(), ElementClass::HyperbolicLike);
        }
        let z = rep.generator("z").unwrap();
        assert_eq!(z.classify().unwrap(), ElementClass::FixedPointFree);
    }

    #[test]
    fn geodesic_pl_backend_validates() {
        let rep = geodesic_genus2(Backend::Pl { grid: 64 });
        rep.validate(2).unwrap();
        for name in ["a1", "b1", "a2", "b2"] {
            let g = rep.generator(name).unwrap();
            assert_eq!(g.classify().unwrap(), ElementClass::HyperbolicLike);
        }
    }

    #[test]
    fn triangle_center_is_exactly_t1() {
        let rep = triangle_237(Backend::Moebius);
        let z = rep.generator("z").unwrap();
        match z {
            LineElement::Moebius(m) => {
                assert_eq!(m.deck(), 1);
                assert!(m.is_identity(0.0) || m.approx_eq(&MoebiusLift::translation(1), 1e-15));
            }
            _ => panic!("moebius backend expected"),
        }
        rep.validate(2).unwrap();
    }

    #[test]
    fn random_pl_is_deterministic_and_valid() {
        let r1 = random_pl(2, 7).unwrap();
        let r2 = random_pl(2, 7).unwrap();
        for (a, b) in r1.generators().iter().zip(r2.generators()) {
            assert_eq!(a.0, b.0);
            assert!(a.1.same_map(&b.1));
        }
        r1.validate(4).unwrap();
        assert!(r1.is_nonabelian());
        // Different seeds give different models.
        let r3 = random_pl(2, 8).unwrap();
        assert!(!r1.generators()[0].1.same_map(&r3.generators()[0].1));
    }

    #[test]
    fn random_pairs_have_expected_shape() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let (a, b) = random_linked_pair(&mut rng);
        let fa = LineElement::Pl(a).fixed_points().unwrap();
        let fb = LineElement::Pl(b).fixed_points().unwrap();
        assert!(fa.is_hyperbolic_like());
        assert!(fb.is_hyperbolic_like());
        let (a, b) = random_unlinked_pair(&mut rng, UnlinkedKinds::lemma_pattern());
        let fa = LineElement::Pl(a).fixed_points().unwrap();
        let fb = LineElement::Pl(b).fixed_points().unwrap();
        // a's block sits left of b's block: a's points interleave nowhere.
        let a_hi = fa.locations().iter().max().unwrap().clone();
        let b_lo = fb.locations().iter().min().unwrap().clone();
        assert!(a_hi < b_lo);
    }

    #[test]
    fn reversing_generator_squares_nontrivially() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let r = random_reversing_pl(&mut rng);
        assert_eq!(r.orientation(), Orientation::Reversing);
        let sq = r.compose(&r);
        assert!(!sq.is_identity());
    }

    #[test]
    fn builtin_dispatch() {
        assert!(builtin("geodesic_genus2", Backend::Moebius, 0).is_ok());
        assert!(builtin("random_pl(2)", Backend::Moebius, 5).is_ok());
        assert!(matches!(
            builtin("nope", Backend::Moebius, 0),
            Err(ModelError::UnknownModel(_))
        ));
    }

    #[test]
    fn moebius_and_pl_geodesic_spectra_agree_at_short_lengths() {
        let m = geodesic_genus2(Backend::Moebius);
        let p = geodesic_genus2(Backend::Pl { grid: 64 });
        // Not the same backend, so compare class by class through fixed-point
        // existence computed independently in each.
        let names = m.generator_names();
        let classes = crate::reps::conjugacy_class_words(&names, 2, false);
        for w in classes {
            let em = m.eval_word(&w).unwrap();
            let ep = p.eval_word(&w).unwrap();
            let hm = !em.fixed_points().unwrap().is_empty();
            let hp = !ep.fixed_points().unwrap().is_empty();
            assert_eq!(hm, hp, "class {w} disagrees between backends");
        }
        let _ = compare_spectra;
    }
}
