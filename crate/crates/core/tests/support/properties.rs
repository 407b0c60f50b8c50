//! Property checks shared by the proptest suite and the acceptance run.
//! Each check draws everything it needs from one seed.

use std::collections::HashMap;
use std::sync::{Arc, OnceLock};

use dualcox::coxeter::{table_types, CoxeterContext};
use dualcox::crystal::coxeter_interval;
use dualcox::interval::{BuildOptions, IntervalPoset, Row};
use dualcox::isometry::{
    greedy_factorization, make_reflection, predict_product, random_isometry, random_reflection, Isometry, Kind,
};
use dualcox::linalg::{GramForm, Scalar, Vector};
use dualcox::modelposet::{bowtie_witness, global_leq, interval_leq, inv};
use proptest::prelude::*;
use proptest::test_runner::TestCaseError;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = Result<(), TestCaseError>;
type NamedCheck = (&'static str, fn(u64) -> Check);

pub const CASES: u32 = 1000;

/// Standard forms and a few Coxeter Gram forms, so non-orthonormal bases get
/// exercised too.
fn grams() -> &'static [Arc<GramForm>] {
    static G: OnceLock<Vec<Arc<GramForm>>> = OnceLock::new();
    G.get_or_init(|| {
        let mut out: Vec<Arc<GramForm>> = (2..=4).map(|n| Arc::new(GramForm::standard(n))).collect();
        for t in ["G~2", "A~3", "B~3"] {
            out.push(CoxeterContext::from_name(t, None).unwrap().gram.clone());
        }
        out
    })
}

struct Draw(ChaCha8Rng);

impl Draw {
    fn new(seed: u64) -> Self {
        Draw(ChaCha8Rng::seed_from_u64(seed))
    }

    fn gram(&mut self) -> Arc<GramForm> {
        let g = grams();
        g[self.0.gen_range(0..g.len())].clone()
    }

    fn isometry(&mut self, gram: &Arc<GramForm>, max_refl: usize) -> Isometry {
        let rng = &mut self.0;
        random_isometry(gram, max_refl, &mut |lo, hi| rng.gen_range(lo..=hi))
    }

    fn reflection(&mut self, gram: &Arc<GramForm>) -> Isometry {
        let rng = &mut self.0;
        random_reflection(gram, &mut |lo, hi| rng.gen_range(lo..=hi))
    }

    fn hyperbolic(&mut self, gram: &Arc<GramForm>) -> Isometry {
        loop {
            let w = self.isometry(gram, 2 * gram.rank() + 2);
            if w.kind() == Kind::Hyperbolic {
                return w;
            }
        }
    }
}

fn product(rs: &[Isometry], gram: &Arc<GramForm>) -> Isometry {
    rs.iter().fold(Isometry::identity(gram.clone()), |acc, r| acc.compose(r))
}

/// `rank(A - I)` plus two when there is no fixed point.
pub fn scherk_length(w: &Isometry) -> usize {
    let n = w.rank();
    let mut m = w.mat().clone();
    for i in 0..n {
        m[(i, i)] -= &Scalar::ONE;
    }
    let k = m.rank();
    if w.is_elliptic() {
        k
    } else {
        k + 2
    }
}

pub fn greedy_factorization_is_minimal(seed: u64) -> Check {
    let mut d = Draw::new(seed);
    let g = d.gram();
    let w = d.isometry(&g, 2 * g.rank() + 2);
    let rs = greedy_factorization(&w);
    prop_assert_eq!(rs.len(), scherk_length(&w));
    prop_assert_eq!(rs.len(), w.reflection_length());
    prop_assert!(rs.iter().all(|r| r.reflection_length() == 1));
    prop_assert_eq!(product(&rs, &g), w);
    Ok(())
}

pub fn product_trichotomy(seed: u64) -> Check {
    let mut d = Draw::new(seed);
    let g = d.gram();
    let w = d.hyperbolic(&g);
    let r = d.reflection(&g);
    let case = predict_product(&w, &r).unwrap();
    let rw = r.compose(&w);
    prop_assert_eq!(case.expected(w.reflection_length()), (rw.kind(), scherk_length(&rw)));
    Ok(())
}

pub fn global_order_axioms(seed: u64) -> Check {
    let mut d = Draw::new(seed);
    let g = d.gram();
    // a chain of prefixes makes comparable triples common
    let w = d.isometry(&g, 2 * g.rank() + 2);
    let rs = greedy_factorization(&w);
    let mut pool: Vec<Isometry> = (0..=rs.len()).map(|i| product(&rs[..i], &g)).collect();
    pool.push(d.isometry(&g, 3));
    pool.push(d.isometry(&g, 3));
    let elems: Vec<_> = pool.iter().map(inv).collect();
    for a in &elems {
        prop_assert!(global_leq(a, a, &g));
        for b in &elems {
            if global_leq(a, b, &g) && global_leq(b, a, &g) {
                prop_assert_eq!(a, b);
            }
            for c in &elems {
                if global_leq(a, b, &g) && global_leq(b, c, &g) {
                    prop_assert!(global_leq(a, c, &g));
                }
            }
        }
    }
    Ok(())
}

pub fn invariant_map_preserves_order(seed: u64) -> Check {
    let mut d = Draw::new(seed);
    let g = d.gram();
    let w = d.isometry(&g, 2 * g.rank() + 2);
    let rs = greedy_factorization(&w);
    let chain: Vec<Isometry> = (0..=rs.len()).map(|i| product(&rs[..i], &g)).collect();
    for (i, u) in chain.iter().enumerate() {
        prop_assert!(interval_leq(u, &w));
        prop_assert!(global_leq(&inv(u), &inv(&w), &g));
        for v in &chain[i..] {
            prop_assert!(global_leq(&inv(u), &inv(v), &g));
        }
    }
    Ok(())
}

pub fn invariant_map_reflects_order(seed: u64) -> Check {
    let mut d = Draw::new(seed);
    let g = d.gram();
    let w = d.isometry(&g, 2 * g.rank() + 2);
    let mut below = Vec::new();
    for _ in 0..3 {
        let mut rest = w.clone();
        let mut prefix = Isometry::identity(g.clone());
        let mut tries = 0;
        while !rest.is_identity() && tries < 200 {
            tries += 1;
            let r = d.reflection(&g);
            let next = r.compose(&rest);
            if next.reflection_length() + 1 == rest.reflection_length() {
                prefix = prefix.compose(&r);
                rest = next;
                below.push(prefix.clone());
            }
        }
    }
    for u in &below {
        prop_assert!(interval_leq(u, &w));
        for v in &below {
            prop_assert_eq!(interval_leq(u, v), global_leq(&inv(u), &inv(v), &g));
        }
    }
    Ok(())
}

pub fn bowtie_survives_conjugation(seed: u64) -> Check {
    let mut d = Draw::new(seed);
    let base = bowtie_witness();
    let g = base.w.gram().clone();
    let h = d.isometry(&g, 4);
    let (h, hinv) = (h.clone(), h.invert());
    let conj = |x: &Isometry| h.compose(x).compose(&hinv);
    let mut b = base.clone();
    b.w = conj(&base.w);
    b.elliptics = [conj(&base.elliptics[0]), conj(&base.elliptics[1])];
    b.hyperbolics = [conj(&base.hyperbolics[0]), conj(&base.hyperbolics[1])];
    prop_assert_eq!(b.claims(), [true; 6]);
    for x in b.elliptics.iter().chain(&b.hyperbolics) {
        prop_assert!(interval_leq(x, &b.w));
    }
    for e in &b.elliptics {
        for f in &b.hyperbolics {
            prop_assert!(interval_leq(e, f));
        }
    }
    Ok(())
}

fn small_coxeter_intervals() -> &'static [IntervalPoset] {
    static P: OnceLock<Vec<IntervalPoset>> = OnceLock::new();
    P.get_or_init(|| {
        table_types()
            .into_iter()
            .filter(|(t, _)| t.rank <= 4)
            .map(|(t, c)| coxeter_interval(&CoxeterContext::new(t, c).unwrap(), &BuildOptions::default()).unwrap())
            .collect()
    })
}

fn mirror(r: Row) -> Row {
    match r {
        Row::Bottom => Row::Top,
        Row::Top => Row::Bottom,
        r => r,
    }
}

pub fn coxeter_grids_are_symmetric() -> bool {
    small_coxeter_intervals().iter().all(|p| p.coarse_grid().is_symmetric())
}

/// `u ↦ u⁻¹w` sends a node to the mirror cell, which is what makes the
/// grid rows reverse into each other.
pub fn complement_lands_in_mirror_cell(seed: u64) -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let ps = small_coxeter_intervals();
    let p = &ps[rng.gen_range(0..ps.len())];
    let s = &p.setting;
    let index: HashMap<&Isometry, usize> = p.nodes.iter().enumerate().map(|(i, n)| (&n.rep, i)).collect();
    let i = rng.gen_range(0..p.len());
    let u = s.shift(&p.nodes[i].rep, rng.gen_range(-2..=2));
    let (rep, _, _) = s.canonicalize(&u.invert().compose(&s.w));
    let j = *index.get(&rep).ok_or_else(|| TestCaseError::fail("complement is not in the interval"))?;
    prop_assert_eq!(p.nodes[j].row, mirror(p.nodes[i].row));
    let width = Scalar::int(s.w.rank() as i64 - 1);
    prop_assert_eq!(&p.column(i) + &p.column(j), width);
    Ok(())
}

pub fn reflections_have_length_one() -> bool {
    let g = Arc::new(GramForm::standard(3));
    let r = make_reflection(&Vector::from_ints(&[1, 1, 0]), &Scalar::ratio(1, 2), &g).unwrap();
    scherk_length(&r) == 1 && greedy_factorization(&r).len() == 1
}

/// Every check, by name, for runners that iterate over them.
#[allow(dead_code)]
pub const CHECKS: [NamedCheck; 7] = [
    ("greedy factorization is minimal", greedy_factorization_is_minimal),
    ("product trichotomy", product_trichotomy),
    ("global order axioms", global_order_axioms),
    ("invariant map preserves order", invariant_map_preserves_order),
    ("invariant map reflects order", invariant_map_reflects_order),
    ("bowtie survives conjugation", bowtie_survives_conjugation),
    ("complement lands in mirror cell", complement_lands_in_mirror_cell),
];
