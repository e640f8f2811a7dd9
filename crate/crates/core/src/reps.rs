//! Finitely generated group representations into the line-homeomorphism
//! group: word evaluation, validation, fixed-point spectra over bounded word
//! length, automorphism application, the periodic-orbit criterion, and a
//! minimality heuristic.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::coord::Coord;
use crate::element::{ElementClass, ElementError, LineElement, Orientation, RatInterval};
use crate::rat;
use crate::words::{each_word_up_to, Word};

/// Iteration cap for translation certificates.
const CERT_MAX_ITER: u32 = 1 << 14;

#[derive(Clone, Debug)]
pub enum RepError {
    EmptyGeneratorSet,
    DuplicateGenerator(String),
    UnboundGenerator(String),
    MixedBackends,
    TauNotEquivariant { name: String, defect: f64 },
    RelatorViolation { word: Word, defect: f64 },
    NotHyperbolicLike { word: Word },
    NoCenter,
    CenterNotTau { defect: f64 },
    NotAHomomorphism { relator: Word, image: i64 },
    GeneratorSetsDiffer,
    OrbitInconsistency { word: Word },
    Element(ElementError),
}

impl From<ElementError> for RepError {
    fn from(e: ElementError) -> Self {
        RepError::Element(e)
    }
}

impl core::fmt::Display for RepError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            RepError::EmptyGeneratorSet => write!(f, "representation has no generators"),
            RepError::DuplicateGenerator(n) => write!(f, "duplicate generator name `{n}`"),
            RepError::UnboundGenerator(n) => write!(f, "unbound generator name `{n}`"),
            RepError::MixedBackends => {
                write!(f, "all generators and tau must share one concrete backend")
            }
            RepError::TauNotEquivariant { name, defect } => {
                write!(f, "tau equivariance fails on `{name}` (defect {defect:e})")
            }
            RepError::RelatorViolation { word, defect } => write!(
                f,
                "relator `{word}` does not evaluate to the identity (defect {defect:e})"
            ),
            RepError::NotHyperbolicLike { word } => {
                write!(f, "word `{word}` has fixed points but is not hyperbolic-like")
            }
            RepError::NoCenter => write!(f, "no designated central generator"),
            RepError::CenterNotTau { defect } => {
                write!(f, "central generator does not evaluate to tau (defect {defect:e})")
            }
            RepError::NotAHomomorphism { relator, image } => {
                write!(f, "twist exponents send relator `{relator}` to {image} != 0")
            }
            RepError::GeneratorSetsDiffer => {
                write!(f, "representations have different generator names")
            }
            RepError::OrbitInconsistency { word } => write!(
                f,
                "orbit boundedness disagrees with the fixed-point solve for `{word}`"
            ),
            RepError::Element(e) => write!(f, "{e}"),
        }
    }
}

impl core::error::Error for RepError {}

/// A finitely generated group mapped into the line-homeomorphism group,
/// together with the distinguished translation `tau`.
#[derive(Clone, Debug)]
pub struct Representation {
    generators: Vec<(String, LineElement)>,
    relators: Vec<Word>,
    tau: LineElement,
    center: Option<String>,
    /// Declared tolerance for relator and equivariance defects (0 demands
    /// exactness; PL-sampled models declare their measured sampling error).
    relator_tol: f64,
}

impl Representation {
    pub fn new(
        generators: Vec<(String, LineElement)>,
        relators: Vec<Word>,
        tau: LineElement,
        center: Option<String>,
        relator_tol: f64,
    ) -> Result<Self, RepError> {
        if generators.is_empty() {
            return Err(RepError::EmptyGeneratorSet);
        }
        let mut generators = generators;
        generators.sort_by(|a, b| a.0.cmp(&b.0));
        for w in generators.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(RepError::DuplicateGenerator(w[0].0.clone()));
            }
        }
        let concrete = |e: &LineElement| match e {
            LineElement::Pl(_) => Ok(0u8),
            LineElement::Moebius(_) => Ok(1u8),
            LineElement::Formal(_) => Err(RepError::Element(ElementError::UnresolvedWord)),
        };
        let backend = concrete(&tau)?;
        for (_, e) in &generators {
            if concrete(e)? != backend {
                return Err(RepError::MixedBackends);
            }
        }
        if let Some(c) = &center {
            if !generators.iter().any(|(n, _)| n == c) {
                return Err(RepError::UnboundGenerator(c.clone()));
            }
        }
        Ok(Representation {
            generators,
            relators,
            tau,
            center,
            relator_tol,
        })
    }

    pub fn generator_names(&self) -> Vec<String> {
        self.generators.iter().map(|(n, _)| n.clone()).collect()
    }

    pub fn generator(&self, name: &str) -> Option<&LineElement> {
        self.generators
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, e)| e)
    }

    pub fn generators(&self) -> &[(String, LineElement)] {
        &self.generators
    }

    pub fn relators(&self) -> &[Word] {
        &self.relators
    }

    pub fn tau(&self) -> &LineElement {
        &self.tau
    }

    pub fn center_name(&self) -> Option<&str> {
        self.center.as_deref()
    }

    pub fn relator_tolerance(&self) -> f64 {
        self.relator_tol
    }

    pub fn identity(&self) -> LineElement {
        self.tau.identity_like()
    }

    /// Composition in letter order, exact on the PL backend.
    pub fn eval_word(&self, w: &Word) -> Result<LineElement, RepError> {
        let mut out = self.identity();
        for letter in w.letters() {
            let g = self
                .generator(&letter.gen)
                .ok_or_else(|| RepError::UnboundGenerator(letter.gen.clone()))?;
            out = out.compose(&g.pow(letter.exp)?)?;
        }
        Ok(out)
    }

    /// Checks tau equivariance, relators, and the hyperbolic-like property
    /// for every freely reduced word up to `word_len`.
    pub fn validate(&self, word_len: usize) -> Result<(), RepError> {
        let grid = 64;
        for (name, g) in &self.generators {
            let (lhs, rhs) = match g.orientation()? {
                Orientation::Preserving => (self.tau.compose(g)?, g.compose(&self.tau)?),
                Orientation::Reversing => (self.tau.compose(g)?, g.compose(&self.tau.invert())?),
            };
            let defect = lhs.grid_defect(&rhs, grid)?;
            if defect > self.relator_tol {
                return Err(RepError::TauNotEquivariant {
                    name: name.clone(),
                    defect,
                });
            }
        }
        if let Some(c) = &self.center {
            let ce = self.generator(c).expect("center bound at construction");
            let defect = ce.grid_defect(&self.tau, grid)?;
            if defect > self.relator_tol {
                return Err(RepError::CenterNotTau { defect });
            }
        }
        for r in &self.relators {
            let e = self.eval_word(r)?;
            let defect = e.grid_defect(&self.identity(), grid)?;
            if defect > self.relator_tol {
                return Err(RepError::RelatorViolation {
                    word: r.clone(),
                    defect,
                });
            }
        }
        self.validate_hyperbolic_like(word_len)
    }

    /// Every orientation-preserving word with fixed points must be
    /// hyperbolic-like. Reversing words always fix exactly one point and are
    /// exempt, as are exact identities.
    pub fn validate_hyperbolic_like(&self, word_len: usize) -> Result<(), RepError> {
        let names = self.generator_names();
        let mut failure: Option<Word> = None;
        each_word_up_to(&names, word_len, &mut |w| {
            if failure.is_some() {
                return;
            }
            if let Ok(e) = self.eval_word(w) {
                if let Ok(ElementClass::Degenerate) = e.classify() {
                    failure = Some(w.clone());
                }
            }
        });
        match failure {
            Some(word) => Err(RepError::NotHyperbolicLike { word }),
            None => Ok(()),
        }
    }

    /// True if some pair of generators fails to commute.
    pub fn is_nonabelian(&self) -> bool {
        for (i, (_, a)) in self.generators.iter().enumerate() {
            for (_, b) in self.generators.iter().skip(i + 1) {
                if let (Ok(ab), Ok(ba)) = (a.compose(b), b.compose(a)) {
                    if !ab.same_map(&ba) {
                        return true;
                    }
                }
            }
        }
        false
    }

    /// Conjugates every generator (and tau) by `h`.
    pub fn conjugated_by(&self, h: &LineElement) -> Result<Representation, RepError> {
        let hinv = h.invert();
        let conj =
            |e: &LineElement| -> Result<LineElement, RepError> { Ok(h.compose(e)?.compose(&hinv)?) };
        let generators = self
            .generators
            .iter()
            .map(|(n, e)| Ok((n.clone(), conj(e)?)))
            .collect::<Result<Vec<_>, RepError>>()?;
        Ok(Representation {
            generators,
            relators: self.relators.clone(),
            tau: conj(&self.tau)?,
            center: self.center.clone(),
            relator_tol: self.relator_tol,
        })
    }

    /// Replaces one generator image (used to build perturbed models).
    pub fn with_generator(&self, name: &str, e: LineElement) -> Result<Representation, RepError> {
        let mut generators = self.generators.clone();
        let slot = generators
            .iter_mut()
            .find(|(n, _)| n == name)
            .ok_or_else(|| RepError::UnboundGenerator(name.to_string()))?;
        slot.1 = e;
        Ok(Representation {
            generators,
            relators: self.relators.clone(),
            tau: self.tau.clone(),
            center: self.center.clone(),
            relator_tol: self.relator_tol,
        })
    }

    /// Adds relators without revalidating (models declare their own).
    pub fn with_relators(mut self, relators: Vec<Word>) -> Representation {
        self.relators = relators;
        self
    }
}

/// One conjugacy class in a spectrum.
#[derive(Clone, Debug)]
pub struct SpectrumEntry {
    pub word: Word,
    pub has_fixed_points: bool,
    pub certificate: RatInterval,
}

/// Fixed-point data for every conjugacy class of words up to a length bound.
#[derive(Clone, Debug)]
pub struct Spectrum {
    pub length_bound: usize,
    pub oriented: bool,
    pub entries: BTreeMap<Word, SpectrumEntry>,
}

/// Canonical class representatives of words up to symbol length `l`, in
/// shortlex order.
pub fn conjugacy_class_words(names: &[String], l: usize, oriented: bool) -> Vec<Word> {
    let mut out = Vec::new();
    each_word_up_to(names, l, &mut |w| {
        if w.is_conjugacy_canonical(oriented) {
            out.push(w.clone());
        }
    });
    out
}

impl Representation {
    /// Enumerates conjugacy classes of words up to length `l`, recording
    /// fixed-point existence with a translation certificate. Distinct keys
    /// that evaluate to the same homeomorphism are merged (exact PL equality
    /// or Moebius matrix equality up to sign and deck).
    pub fn spectrum(&self, l: usize, oriented: bool) -> Result<Spectrum, RepError> {
        let names = self.generator_names();
        let mut entries: BTreeMap<Word, SpectrumEntry> = BTreeMap::new();
        let mut seen: BTreeSet<String> = BTreeSet::new();
        for word in conjugacy_class_words(&names, l, oriented) {
            let e = self.eval_word(&word)?;
            if !seen.insert(element_fingerprint(&e)) {
                continue;
            }
            let (has_fixed_points, certificate) = spectral_data(&e)?;
            entries.insert(
                word.clone(),
                SpectrumEntry {
                    word,
                    has_fixed_points,
                    certificate,
                },
            );
        }
        Ok(Spectrum {
            length_bound: l,
            oriented,
            entries,
        })
    }
}

fn spectral_data(e: &LineElement) -> Result<(bool, RatInterval), RepError> {
    if e.is_reversing() {
        // Reversing elements always fix exactly one point.
        return Ok((true, RatInterval::exact_zero()));
    }
    let has = !e.fixed_points()?.is_empty();
    let certificate = if has {
        RatInterval::exact_zero()
    } else {
        e.translation_certificate(CERT_MAX_ITER)?
    };
    Ok((has, certificate))
}

/// A stable identity for the underlying homeomorphism, used to merge
/// duplicate group elements.
fn element_fingerprint(e: &LineElement) -> String {
    use core::fmt::Write;
    let mut s = String::new();
    match e {
        LineElement::Pl(m) => {
            let _ = write!(s, "pl:{:?}:", m.orientation());
            for (x, y) in m.breakpoints() {
                let _ = write!(s, "{}/{};{}/{},", x.numer(), x.denom(), y.numer(), y.denom());
            }
        }
        LineElement::Moebius(m) => {
            // Matrices are identified up to sign; quantized at 1e-9.
            let mm = m.matrix();
            let flat = [mm[0][0], mm[0][1], mm[1][0], mm[1][1]];
            let lead = flat
                .iter()
                .find(|v| crate::real::abs(**v) > 1e-9)
                .copied()
                .unwrap_or(1.0);
            let sign = if lead < 0.0 { -1.0 } else { 1.0 };
            let _ = write!(s, "mb:{}:", m.deck());
            for v in flat {
                let _ = write!(s, "{},", crate::real::round(sign * v * 1e9) as i64);
            }
        }
        LineElement::Formal(w) => {
            let _ = write!(s, "fm:{w}");
        }
    }
    s
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CompareOutcome {
    Equal,
    Mismatch {
        witness: Word,
        in_first: bool,
        in_second: bool,
    },
}

/// Compares fixed-point existence class by class; on disagreement returns
/// the shortlex-least witness word.
pub fn compare_spectra(
    rep1: &Representation,
    rep2: &Representation,
    l: usize,
    oriented: bool,
) -> Result<CompareOutcome, RepError> {
    let names = rep1.generator_names();
    if names != rep2.generator_names() {
        return Err(RepError::GeneratorSetsDiffer);
    }
    for word in conjugacy_class_words(&names, l, oriented) {
        let e1 = rep1.eval_word(&word)?;
        let e2 = rep2.eval_word(&word)?;
        let h1 = e1.is_reversing() || !e1.fixed_points()?.is_empty();
        let h2 = e2.is_reversing() || !e2.fixed_points()?.is_empty();
        if h1 != h2 {
            return Ok(CompareOutcome::Mismatch {
                witness: word,
                in_first: h1,
                in_second: h2,
            });
        }
    }
    Ok(CompareOutcome::Equal)
}

/// An endomorphism given by generator images, with optional inverse images
/// for the bijectivity check.
#[derive(Clone, Debug)]
pub struct Automorphism {
    pub images: Vec<(String, Word)>,
    pub inverse_images: Option<Vec<(String, Word)>>,
}

impl Automorphism {
    pub fn identity(names: &[String]) -> Self {
        Automorphism {
            images: names
                .iter()
                .map(|n| (n.clone(), Word::generator(n)))
                .collect(),
            inverse_images: None,
        }
    }

    /// Conjugation by `w`.
    pub fn inner(names: &[String], w: &Word) -> Self {
        Automorphism {
            images: names
                .iter()
                .map(|n| (n.clone(), Word::generator(n).conjugated_by(w)))
                .collect(),
            inverse_images: Some(
                names
                    .iter()
                    .map(|n| (n.clone(), Word::generator(n).conjugated_by(&w.inverse())))
                    .collect(),
            ),
        }
    }

    pub fn image_of(&self, name: &str) -> Option<&Word> {
        self.images.iter().find(|(n, _)| n == name).map(|(_, w)| w)
    }

    /// Generator-wise substitution into a word.
    pub fn apply_to_word(&self, w: &Word) -> Option<Word> {
        let mut out = Word::identity();
        for letter in w.letters() {
            let img = self.image_of(&letter.gen)?;
            out = out.concat(&img.pow(letter.exp));
        }
        Some(out)
    }

    /// When inverse images are supplied, checks both round trips restrict to
    /// the identity on the generators of `rep` (as elements).
    pub fn check_bijective_on_ball(&self, rep: &Representation) -> Result<bool, RepError> {
        let inv = match &self.inverse_images {
            None => return Ok(true),
            Some(inv) => Automorphism {
                images: inv.clone(),
                inverse_images: None,
            },
        };
        for name in rep.generator_names() {
            let g = Word::generator(&name);
            let round1 = match inv.apply_to_word(&g).and_then(|w| self.apply_to_word(&w)) {
                Some(w) => w,
                None => return Ok(false),
            };
            let round2 = match self.apply_to_word(&g).and_then(|w| inv.apply_to_word(&w)) {
                Some(w) => w,
                None => return Ok(false),
            };
            let ge = rep.eval_word(&g)?;
            if !rep.eval_word(&round1)?.same_map(&ge) || !rep.eval_word(&round2)?.same_map(&ge) {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Generator-wise substitution `g -> eval(sigma(g))`; relators revalidated.
pub fn apply_automorphism(
    rep: &Representation,
    sigma: &Automorphism,
) -> Result<Representation, RepError> {
    let mut generators = Vec::with_capacity(rep.generators().len());
    for (name, _) in rep.generators() {
        let image = sigma
            .image_of(name)
            .ok_or_else(|| RepError::UnboundGenerator(name.clone()))?;
        generators.push((name.clone(), rep.eval_word(image)?));
    }
    let out = Representation::new(
        generators,
        rep.relators().to_vec(),
        rep.tau().clone(),
        rep.center_name().map(|s| s.to_string()),
        rep.relator_tolerance(),
    )?;
    for r in out.relators() {
        let e = out.eval_word(r)?;
        let defect = e.grid_defect(&out.identity(), 64)?;
        if defect > out.relator_tolerance() {
            return Err(RepError::RelatorViolation {
                word: r.clone(),
                defect,
            });
        }
    }
    Ok(out)
}

/// The twist `gamma -> gamma z^{phi(gamma)}` along the designated central
/// generator; `phi` must vanish on the center and on every relator.
pub fn fiber_twist_automorphism(
    rep: &Representation,
    phi: &[(String, i64)],
) -> Result<Automorphism, RepError> {
    let center = rep.center_name().ok_or(RepError::NoCenter)?.to_string();
    let phi_of = |name: &str| -> i64 {
        phi.iter()
            .find(|(n, _)| n == name)
            .map(|(_, k)| *k)
            .unwrap_or(0)
    };
    if phi_of(&center) != 0 {
        return Err(RepError::NotAHomomorphism {
            relator: Word::generator(&center),
            image: phi_of(&center),
        });
    }
    for r in rep.relators() {
        let image: i64 = r.letters().iter().map(|l| l.exp * phi_of(&l.gen)).sum();
        if image != 0 {
            return Err(RepError::NotAHomomorphism {
                relator: r.clone(),
                image,
            });
        }
    }
    let images = rep
        .generator_names()
        .into_iter()
        .map(|n| {
            let k = if n == center { 0 } else { phi_of(&n) };
            let w = Word::generator(&n).concat(&Word::generator(&center).pow(k));
            (n, w)
        })
        .collect();
    Ok(Automorphism {
        images,
        inverse_images: None,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OrbitVerdict {
    BoundedWithFixedPoint,
    UnboundedNoFixedPoint,
}

/// Decides whether the cyclic group generated by `w` acts with a bounded
/// orbit, equivalently with a fixed point (of the square, when `w` reverses
/// orientation). The fixed-point solve is the ground truth; the orbit is
/// cross-checked against it and disagreement is an error.
pub fn periodic_orbit_criterion(
    rep: &Representation,
    w: &Word,
    x: &Coord,
    n_range: u32,
) -> Result<OrbitVerdict, RepError> {
    let g = rep.eval_word(w)?;
    let orbit = crate::element::orbit(&g, x, n_range)?;
    let lo = orbit.iter().map(|c| c.to_rational()).min().unwrap();
    let hi = orbit.iter().map(|c| c.to_rational()).max().unwrap();
    if g.is_reversing() {
        // A reversing element always fixes a point; the square's fixed
        // points confine the orbit to [min(x, gx) - 1, max(x, gx) + 1].
        let sq = g.compose(&g)?;
        if !sq.is_identity() && sq.fixed_points()?.is_empty() {
            return Err(RepError::OrbitInconsistency { word: w.clone() });
        }
        let gx = g.eval(x)?.to_rational();
        let xr = x.to_rational();
        let window_lo = core::cmp::min(xr.clone(), gx.clone()) - rat::one();
        let window_hi = core::cmp::max(xr, gx) + rat::one();
        if lo < window_lo || hi > window_hi {
            return Err(RepError::OrbitInconsistency { word: w.clone() });
        }
        return Ok(OrbitVerdict::BoundedWithFixedPoint);
    }
    if !g.fixed_points()?.is_empty() {
        // Orbits of an element with fixed points stay between adjacent fixed
        // points, so the spread can never exceed twice the period gap.
        if hi - lo > rat::rat_int(2) {
            return Err(RepError::OrbitInconsistency { word: w.clone() });
        }
        Ok(OrbitVerdict::BoundedWithFixedPoint)
    } else {
        // Fixed-point free: the orbit must be strictly monotone and the
        // translation certificate must exclude zero.
        let mut increasing = true;
        let mut decreasing = true;
        for pair in orbit.windows(2) {
            if pair[0] >= pair[1] {
                increasing = false;
            }
            if pair[0] <= pair[1] {
                decreasing = false;
            }
        }
        let cert = g.translation_certificate(CERT_MAX_ITER)?;
        if !(increasing || decreasing) || !cert.excludes_zero() {
            return Err(RepError::OrbitInconsistency { word: w.clone() });
        }
        Ok(OrbitVerdict::UnboundedNoFixedPoint)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum MinimalityVerdict {
    Pass,
    Fail { uncovered: (f64, f64) },
}

#[derive(Clone, Debug)]
pub struct MinimalityReport {
    pub verdict: MinimalityVerdict,
    pub max_gap: f64,
    pub orbit_size: usize,
}

/// Pass iff the orbit of 0 under all words of length at most `l` is
/// `eps`-dense in `[0, 1)` (max circular gap at most `2 eps`).
pub fn check_minimality_heuristic(
    rep: &Representation,
    l: usize,
    eps: f64,
) -> Result<MinimalityReport, RepError> {
    let quantize = |x: f64| -> i64 {
        let r = x - crate::real::floor(x);
        crate::real::round(r * 1e12) as i64
    };
    let mut seen: BTreeSet<i64> = BTreeSet::new();
    let mut frontier: Vec<f64> = alloc::vec![0.0];
    seen.insert(quantize(0.0));
    let mut elems: Vec<LineElement> = Vec::new();
    for (_, g) in rep.generators() {
        elems.push(g.clone());
        elems.push(g.invert());
    }
    for _ in 0..l {
        let mut next = Vec::new();
        for p in &frontier {
            for e in &elems {
                let q = e.eval_f64(*p)?;
                let qf = q - crate::real::floor(q);
                if seen.insert(quantize(qf)) {
                    next.push(qf);
                }
            }
        }
        if next.is_empty() {
            break;
        }
        frontier = next;
    }
    let mut pts: Vec<f64> = seen.iter().map(|q| *q as f64 / 1e12).collect();
    pts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut max_gap = 0.0f64;
    let mut gap_at = (0.0f64, 1.0f64);
    for i in 0..pts.len() {
        let next = if i + 1 < pts.len() {
            pts[i + 1]
        } else {
            pts[0] + 1.0
        };
        let gap = next - pts[i];
        if gap > max_gap {
            max_gap = gap;
            gap_at = (pts[i], next);
        }
    }
    let verdict = if max_gap <= 2.0 * eps {
        MinimalityVerdict::Pass
    } else {
        MinimalityVerdict::Fail {
            uncovered: (gap_at.0 + eps, gap_at.1 - eps),
        }
    };
    Ok(MinimalityReport {
        verdict,
        max_gap,
        orbit_size: pts.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::plz::PlMap;
    use crate::rat::rat;
    use crate::words::parse_word;
    use alloc::vec;

    fn hyperbolic_pl() -> PlMap {
        PlMap::new(
            vec![
                (rat(0, 1), rat(0, 1)),
                (rat(1, 4), rat(3, 8)),
                (rat(1, 2), rat(1, 2)),
                (rat(3, 4), rat(5, 8)),
            ],
            crate::plz::Orientation::Preserving,
        )
        .unwrap()
    }

    fn rep_with_center() -> Representation {
        Representation::new(
            vec![
                ("a".into(), LineElement::Pl(hyperbolic_pl())),
                ("z".into(), LineElement::Pl(PlMap::translation(rat(1, 1)))),
            ],
            vec![],
            LineElement::Pl(PlMap::translation(rat(1, 1))),
            Some("z".into()),
            0.0,
        )
        .unwrap()
    }

    #[test]
    fn eval_word_basics() {
        let rep = rep_with_center();
        assert!(rep.eval_word(&Word::identity()).unwrap().is_identity());
        let z = rep.eval_word(&parse_word("z").unwrap()).unwrap();
        assert!(z.same_map(rep.tau()));
        let gg = rep.eval_word(&parse_word("a a^-1").unwrap()).unwrap();
        assert!(gg.is_identity());
        assert!(matches!(
            rep.eval_word(&parse_word("missing").unwrap()),
            Err(RepError::UnboundGenerator(_))
        ));
    }

    #[test]
    fn validation_passes_and_rejects() {
        let rep = rep_with_center();
        rep.validate(3).unwrap();
        // A degenerate generator fails the hyperbolic-like check at length 1.
        let degenerate = PlMap::new(
            vec![
                (rat(0, 1), rat(0, 1)),
                (rat(1, 4), rat(1, 4)),
                (rat(1, 2), rat(3, 8)),
            ],
            crate::plz::Orientation::Preserving,
        )
        .unwrap();
        let bad = rep
            .with_generator("a", LineElement::Pl(degenerate))
            .unwrap();
        assert!(matches!(
            bad.validate(1),
            Err(RepError::NotHyperbolicLike { .. })
        ));
    }

    #[test]
    fn spectrum_single_generator() {
        let rep = Representation::new(
            vec![("a".into(), LineElement::Pl(hyperbolic_pl()))],
            vec![],
            LineElement::Pl(PlMap::translation(rat(1, 1))),
            None,
            0.0,
        )
        .unwrap();
        let s = rep.spectrum(1, false).unwrap();
        // One class at length 1: a (its inverse merges into the same class).
        assert_eq!(s.entries.len(), 1);
        let e = s.entries.values().next().unwrap();
        assert!(e.has_fixed_points);
        assert!(e.certificate.contains_zero());
    }

    #[test]
    fn central_shift_kills_fixed_points() {
        let rep = rep_with_center();
        let az = rep.eval_word(&parse_word("a z").unwrap()).unwrap();
        assert!(az.fixed_points().unwrap().is_empty());
        let cert = az.translation_certificate(1 << 14).unwrap();
        assert!(cert.excludes_zero());
        let s = rep.spectrum(2, false).unwrap();
        let key = parse_word("a z").unwrap().conjugacy_key(false);
        let entry = s.entries.get(&key).unwrap();
        assert!(!entry.has_fixed_points);
        assert!(entry.certificate.excludes_zero());
    }

    #[test]
    fn compare_spectra_detects_shift() {
        let rep = rep_with_center();
        assert_eq!(
            compare_spectra(&rep, &rep, 3, false).unwrap(),
            CompareOutcome::Equal
        );
        // Conjugation never changes the spectrum.
        let theta = LineElement::Pl(PlMap::translation(rat(1, 3)));
        let conj = rep.conjugated_by(&theta).unwrap();
        assert_eq!(
            compare_spectra(&rep, &conj, 3, false).unwrap(),
            CompareOutcome::Equal
        );
        // Post-composing a generator with T_1 flips its class.
        let shifted = rep
            .with_generator(
                "a",
                LineElement::Pl(hyperbolic_pl().compose(&PlMap::translation(rat(1, 1)))),
            )
            .unwrap();
        match compare_spectra(&rep, &shifted, 3, false).unwrap() {
            CompareOutcome::Mismatch { witness, .. } => {
                assert_eq!(witness, parse_word("a").unwrap());
            }
            other => panic!("expected mismatch, got {other:?}"),
        }
    }

    #[test]
    fn fiber_twist_shifts_one_generator() {
        let rep = rep_with_center();
        let sigma = fiber_twist_automorphism(&rep, &[("a".into(), 1)]).unwrap();
        assert_eq!(sigma.image_of("a").unwrap().to_string(), "a z");
        let twisted = apply_automorphism(&rep, &sigma).unwrap();
        let a_img = twisted.generator("a").unwrap();
        assert!(a_img.fixed_points().unwrap().is_empty());
        match compare_spectra(&rep, &twisted, 3, false).unwrap() {
            CompareOutcome::Mismatch { witness, .. } => {
                assert_eq!(witness.to_string(), "a");
            }
            other => panic!("expected mismatch, got {other:?}"),
        }
        // phi == 0 gives the identity automorphism.
        let id = fiber_twist_automorphism(&rep, &[]).unwrap();
        let same = apply_automorphism(&rep, &id).unwrap();
        assert_eq!(
            compare_spectra(&rep, &same, 2, false).unwrap(),
            CompareOutcome::Equal
        );
    }

    #[test]
    fn twist_must_vanish_on_relators() {
        let rep = rep_with_center().with_relators(vec![parse_word("a^2").unwrap()]);
        assert!(matches!(
            fiber_twist_automorphism(&rep, &[("a".into(), 1)]),
            Err(RepError::NotAHomomorphism { .. })
        ));
    }

    #[test]
    fn inner_automorphism_preserves_spectrum() {
        let rep = rep_with_center();
        let sigma = Automorphism::inner(&rep.generator_names(), &parse_word("a").unwrap());
        assert!(sigma.check_bijective_on_ball(&rep).unwrap());
        let inner = apply_automorphism(&rep, &sigma).unwrap();
        assert_eq!(
            compare_spectra(&rep, &inner, 3, false).unwrap(),
            CompareOutcome::Equal
        );
    }

    #[test]
    fn orbit_criterion_cases() {
        let rep = rep_with_center();
        let x = Coord::Rational(rat(1, 3));
        assert_eq!(
            periodic_orbit_criterion(&rep, &parse_word("a").unwrap(), &x, 10).unwrap(),
            OrbitVerdict::BoundedWithFixedPoint
        );
        assert_eq!(
            periodic_orbit_criterion(&rep, &parse_word("z").unwrap(), &x, 10).unwrap(),
            OrbitVerdict::UnboundedNoFixedPoint
        );
    }

    #[test]
    fn orbit_criterion_reversing_uses_square() {
        let r = PlMap::reflection(rat(1, 3)).compose(&hyperbolic_pl());
        let rep = Representation::new(
            vec![("r".into(), LineElement::Pl(r))],
            vec![],
            LineElement::Pl(PlMap::translation(rat(1, 1))),
            None,
            0.0,
        )
        .unwrap();
        let verdict = periodic_orbit_criterion(
            &rep,
            &parse_word("r").unwrap(),
            &Coord::Rational(rat(1, 5)),
            16,
        )
        .unwrap();
        assert_eq!(verdict, OrbitVerdict::BoundedWithFixedPoint);
    }

    #[test]
    fn minimality_heuristic_failures() {
        let single = Representation::new(
            vec![("a".into(), LineElement::Pl(hyperbolic_pl()))],
            vec![],
            LineElement::Pl(PlMap::translation(rat(1, 1))),
            None,
            0.0,
        )
        .unwrap();
        let report = check_minimality_heuristic(&single, 6, 0.02).unwrap();
        assert!(matches!(report.verdict, MinimalityVerdict::Fail { .. }));
        // Identity-only rep: nothing is covered.
        let trivial = Representation::new(
            vec![("e".into(), LineElement::identity_pl())],
            vec![],
            LineElement::Pl(PlMap::translation(rat(1, 1))),
            None,
            0.0,
        )
        .unwrap();
        let report = check_minimality_heuristic(&trivial, 4, 0.02).unwrap();
        assert_eq!(report.max_gap, 1.0);
        assert!(matches!(report.verdict, MinimalityVerdict::Fail { .. }));
    }
}
