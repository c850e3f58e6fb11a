//! Acceptance gate. All criteria run sequentially in one test so their wall
//! clock limits are measured without interference; each prints one line.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use stallings_core::bounds::{classical_bounds, compare, family_pair, paper_bound, paper_error_term};
use stallings_core::core::{core_from_words, BasedCore};
use stallings_core::covering::{
    checker_count, complete_to_finite_cover, escape_witness, extended_spine, index, is_galois,
    schreier_basis, spine_invariants, Index, SpineInvariants,
};
use stallings_core::excision::lattice_excision;
use stallings_core::graph::{self, Graph, Path, Subgraph};
use stallings_core::pullback::{
    brute_force_double_cosets, double_coset_reps, fiber_product, intersection_rank_sum, DoubleCoset,
};
use stallings_core::sample::{core_from_permutations, random_complete, random_generators, random_word};
use stallings_core::word::{apply_substitution, parse_word, Substitution, Word};

const SEED: u64 = 0x5EED_2024;

fn rng(salt: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(SEED ^ salt.wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

fn w(s: &str) -> Word {
    parse_word(s, 2).unwrap()
}

fn within(start: Instant, limit: Duration) {
    let took = start.elapsed();
    assert!(took < limit, "took {took:?}, limit {limit:?}");
}

/// 1000 seeded non-trivial cores: up to 5 generators of length up to 12.
fn random_cores(salt: u64, count: usize) -> Vec<BasedCore> {
    let mut r = rng(salt);
    (0..count)
        .map(|_| core_from_words(&random_generators(&mut r, 2, 5, 12), 2).unwrap())
        .collect()
}

fn c1_realization() {
    let start = Instant::now();
    let a = [parse_word("ab", 2).unwrap()];
    let phi1 = Substitution::new(vec![w("a"), w("b")]);
    let phi2 = Substitution::new(vec![w("a"), w("Ab")]);
    let i1 = spine_invariants(&core_from_words(&apply_substitution(&a, &phi1), 2).unwrap()).unwrap();
    let i2 = spine_invariants(&core_from_words(&apply_substitution(&a, &phi2), 2).unwrap()).unwrap();
    let took = start.elapsed();
    assert_eq!((i1.h, i1.n1, i1.n2), (2, 1, 1));
    assert_eq!((i2.h, i2.n1, i2.n2), (1, 1, 0));
    assert_eq!(i1.rank, 1);
    assert_eq!(i2.rank, 1);
    assert!(took < Duration::from_millis(1), "took {took:?}");
}

/// Counts taken from the graph and the extended spine rather than from the
/// label-arc formula.
fn structural_invariants(c: &BasedCore) -> SpineInvariants {
    let es = extended_spine(c).unwrap();
    SpineInvariants {
        h: c.graph().vertex_count(),
        n1: es.pair_count(1),
        n2: es.pair_count(2),
        rank: graph::graph_rank(c.graph()).unwrap(),
    }
}

fn c2_rank_identity() {
    let start = Instant::now();
    let cores = random_cores(2, 1000);
    for c in &cores {
        let s = structural_invariants(c);
        assert_eq!(s.rank + s.n1 + s.n2, s.h + 1, "{s:?}");
        assert_eq!(spine_invariants(c).unwrap(), s);
    }
    within(start, Duration::from_secs(5));
}

fn c3_interior_and_checkers() {
    let start = Instant::now();
    let cores = random_cores(2, 1000);
    for c in &cores {
        let es = extended_spine(c).unwrap();
        es.check().unwrap();
        let rank = graph::graph_rank(c.graph()).unwrap();
        assert!(es.interior_count >= es.pair_count(1) + es.pair_count(2));
        assert_eq!(checker_count(&es), rank - 1);
    }
    within(start, Duration::from_secs(5));
}

fn c4_nielsen_schreier() {
    let start = Instant::now();
    let mut r = rng(4);
    for _ in 0..200 {
        let n = r.gen_range(1..=50);
        let c = random_complete(&mut r, 2, n).unwrap();
        assert_eq!(index(&c), Index::Finite(n));
        assert_eq!(graph::graph_rank(c.graph()).unwrap(), n + 1);
        let tree = graph::spanning_tree(c.graph(), 0).unwrap();
        let basis = schreier_basis(&c, &tree).unwrap();
        assert_eq!(basis.len(), n + 1);
        assert_eq!(core_from_words(&basis, 2).unwrap(), c);
    }
    within(start, Duration::from_secs(10));
}

fn c5_intersection_bound() {
    let start = Instant::now();
    let mut r = rng(5);
    for _ in 0..1000 {
        let a = core_from_words(&random_generators(&mut r, 2, 5, 12), 2).unwrap();
        let b = core_from_words(&random_generators(&mut r, 2, 5, 12), 2).unwrap();
        let report = compare(&a, &b).unwrap();
        let (ia, ib) = (spine_invariants(&a).unwrap(), spine_invariants(&b).unwrap());
        for i in [1, 2] {
            let bound = paper_bound(&ia, &ib, i).unwrap();
            assert!(report.exact_sum <= bound, "counterexample {i}: {report:?}");
        }
    }
    within(start, Duration::from_secs(60));
}

fn c6_tightness() {
    let c = core_from_words(&[w("a"), w("baB")], 2).unwrap();
    let report = compare(&c, &c).unwrap();
    assert_eq!(report.exact_sum, 1);
    assert_eq!(report.paper_bound_i1, 1);
    assert_eq!(report.paper_bound_i2, 4);
}

fn c7_family() {
    let start = Instant::now();
    for k in 2..=50usize {
        let (a, b) = family_pair(k).unwrap();
        let k = k as i64;
        for c in [&a, &b] {
            let inv = spine_invariants(c).unwrap();
            assert_eq!((inv.h as i64, inv.n1, inv.n2), (k, 0, 1));
        }
        let report = compare(&a, &b).unwrap();
        assert_eq!(paper_error_term(&report.inv1, &report.inv2, 1), 0);
        assert_eq!(report.paper_bound_i1, (k - 1) * (k - 1));
        assert!(report.exact_sum <= (k - 1) * (k - 1));
        let eps = classical_bounds(k as usize, k as usize);
        assert_eq!(eps.neumann, (k - 1) * (k - 1));
        assert_eq!(eps.burns, (k - 2) * (k - 1));
        // (k-2)^2 - 1 is the Tardos product; its estimate clamps it at 0,
        // which only matters at k = 2.
        assert_eq!(eps.tardos, ((k - 2) * (k - 2) - 1).max(0));
        if k >= 3 {
            assert_eq!(eps.tardos, (k - 2) * (k - 2) - 1);
        }
        assert_eq!(eps.dicks, (k - 3) * (k - 3));
    }
    within(start, Duration::from_secs(30));
}

/// Cores with at most 6 vertices from generators of length at most 6, so
/// every vertex is within distance 3 of the basepoint and each component's
/// representative has length at most 6.
fn small_cores(count: usize) -> Vec<BasedCore> {
    let mut r = rng(8);
    let mut out = Vec::new();
    while out.len() < count {
        let c = core_from_words(&random_generators(&mut r, 2, 3, 6), 2).unwrap();
        if c.vertex_count() <= 6 {
            out.push(c);
        }
    }
    out
}

fn c8_double_cosets() {
    let start = Instant::now();
    let corpus = small_cores(100);
    let mut pairs = 0;
    for (i, c1) in corpus.iter().enumerate() {
        for c2 in &corpus[i..] {
            let report = fiber_product(c1, c2).unwrap();
            let reps = double_coset_reps(&report);
            let oracle = brute_force_double_cosets(c1, c2, 6).unwrap();
            assert_eq!(reps.len(), oracle.len(), "{c1:?} {c2:?}");
            for (g, _) in &reps {
                assert!(g.len() <= 6);
                let hits = oracle
                    .iter()
                    .filter(|o| DoubleCoset::new(c1, c2, o).unwrap().contains(g))
                    .count();
                assert_eq!(hits, 1, "rep {g} against {oracle:?}");
            }
            let sum: usize = oracle
                .iter()
                .map(|g| {
                    let k = stallings_core::pullback::pointed_intersection(c1, &c2.conjugate(g)).unwrap();
                    k.subgroup_rank() - 1
                })
                .sum();
            assert_eq!(sum, intersection_rank_sum(&report));
            pairs += 1;
        }
    }
    assert_eq!(pairs, 100 * 101 / 2);
    within(start, Duration::from_secs(60));
}

fn c9_hall_completion() {
    let start = Instant::now();
    let mut r = rng(9);
    let mut done = 0;
    while done < 200 {
        let gens = random_generators(&mut r, 2, 3, 6);
        let c = core_from_words(&gens, 2).unwrap();
        if c.vertex_count() > 8 {
            continue;
        }
        let mut avoid = Vec::new();
        let want = r.gen_range(0..=3);
        let mut draws = 0;
        while avoid.len() < want && draws < 100 {
            draws += 1;
            let len = r.gen_range(1..=8);
            let x = random_word(&mut r, 2, len);
            if !c.contains(&x) {
                avoid.push(x);
            }
        }
        let done_cover = complete_to_finite_cover(&c, &avoid).unwrap();
        let cover = &done_cover.cover;
        assert!(cover.is_complete());
        assert!(matches!(index(cover), Index::Finite(_)));
        assert!(gens.iter().all(|g| cover.contains(g)));
        assert!(avoid.iter().all(|x| !cover.contains(x)));
        // the embedding is basepoint- and label-preserving
        assert_eq!(done_cover.embedding[0], 0);
        let g = c.graph();
        for d in g.arcs() {
            let l = c.labeled().label(d);
            assert_eq!(
                cover.next(done_cover.embedding[g.src(d)], l),
                Some(done_cover.embedding[g.target(d)])
            );
        }
        assert!(done_cover.tree.is_tree(cover.graph()));
        assert_eq!(done_cover.tree.vertices.len(), cover.vertex_count());
        assert!(done_cover.extends_schreier_basis(&c));
        done += 1;
    }
    within(start, Duration::from_secs(30));
}

fn compose(p: &[usize], q: &[usize]) -> Vec<usize> {
    // apply p, then q
    p.iter().map(|&i| q[i]).collect()
}

/// Elements of the permutation group generated by `gens`.
fn closure(gens: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let id: Vec<usize> = (0..gens[0].len()).collect();
    let mut index = HashMap::from([(id.clone(), 0)]);
    let mut elems = vec![id];
    let mut queue = VecDeque::from([0]);
    while let Some(k) = queue.pop_front() {
        for g in gens {
            let e = compose(&elems[k], g);
            if !index.contains_key(&e) {
                index.insert(e.clone(), elems.len());
                queue.push_back(elems.len());
                elems.push(e);
            }
        }
    }
    elems
}

/// Right-regular action of the group generated by `gens`: point stabilizers
/// are trivial, so the subgroup is the kernel of the map onto the group.
fn regular(gens: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let elems = closure(gens);
    let pos: HashMap<_, _> = elems.iter().enumerate().map(|(k, e)| (e.clone(), k)).collect();
    gens.iter()
        .map(|g| elems.iter().map(|e| pos[&compose(e, g)]).collect())
        .collect()
}

fn transitive(perms: &[Vec<usize>]) -> bool {
    let n = perms[0].len();
    let mut seen = BTreeSet::from([0]);
    let mut stack = vec![0];
    while let Some(v) = stack.pop() {
        for p in perms {
            if seen.insert(p[v]) {
                stack.push(p[v]);
            }
        }
    }
    seen.len() == n
}

fn c10_galois_and_escape() {
    let start = Instant::now();
    let mut r = rng(10);
    let mut normal = 0;
    while normal < 20 {
        let m = r.gen_range(2..=5);
        let gens: Vec<Vec<usize>> = (0..2)
            .map(|_| {
                let mut p: Vec<usize> = (0..m).collect();
                p.shuffle(&mut r);
                p
            })
            .collect();
        let reg = regular(&gens);
        let c = core_from_permutations(&reg).unwrap();
        assert_eq!(c.vertex_count(), closure(&gens).len());
        assert!(is_galois(&c).unwrap().galois);
        normal += 1;
    }
    let mut non_normal = 0;
    let mut tried = 0;
    while non_normal < 20 {
        tried += 1;
        assert!(tried < 10_000);
        let n = r.gen_range(3..=8);
        let perms: Vec<Vec<usize>> = (0..2)
            .map(|_| {
                let mut p: Vec<usize> = (0..n).collect();
                p.shuffle(&mut r);
                p
            })
            .collect();
        if !transitive(&perms) {
            continue;
        }
        let c = core_from_permutations(&perms).unwrap();
        // a transitive action has normal stabilizers iff it is regular
        let regular_action = closure(&perms).len() == n;
        let verdict = is_galois(&c).unwrap();
        assert_eq!(verdict.galois, regular_action);
        if let Some(wit) = verdict.witness {
            assert!(c.contains(&wit.word));
            assert_ne!(c.trace_from(wit.vertex, &wit.word), Ok(wit.vertex));
            non_normal += 1;
        }
    }
    let mut checked = 0;
    while checked < 100 {
        let c = core_from_words(&random_generators(&mut r, 2, 3, 8), 2).unwrap();
        if c.is_complete() {
            continue;
        }
        let len = r.gen_range(1..=8);
        let x = random_word(&mut r, 2, len);
        let g = escape_witness(&c, &x).unwrap();
        assert!(!c.contains(&x.conjugate_by(&g)), "{g} for {x}");
        checked += 1;
    }
    within(start, Duration::from_secs(10));
}

/// Random connected base graph of rank 2 on `n` vertices.
fn random_base(r: &mut ChaCha8Rng) -> Graph {
    let n = r.gen_range(2..=6);
    let mut arcs: Vec<(usize, usize)> = (1..n).map(|v| (r.gen_range(0..v), v)).collect();
    for _ in 0..2 {
        arcs.push((r.gen_range(0..n), r.gen_range(0..n)));
    }
    arcs.shuffle(r);
    Graph::from_arcs(n, &arcs).unwrap()
}

/// Random spanning tree: arcs in random order, kept when they join two
/// different components.
fn random_tree(r: &mut ChaCha8Rng, g: &Graph) -> Subgraph {
    let mut parent: Vec<usize> = g.vertices().collect();
    fn find(parent: &mut [usize], v: usize) -> usize {
        if parent[v] != v {
            let root = find(parent, parent[v]);
            parent[v] = root;
        }
        parent[v]
    }
    let mut arcs: Vec<usize> = g.arcs().collect();
    arcs.shuffle(r);
    let mut tree = Subgraph {
        vertices: g.vertices().collect(),
        darts: BTreeSet::new(),
    };
    for d in arcs {
        let (a, b) = (find(&mut parent, g.src(d)), find(&mut parent, g.target(d)));
        if a != b {
            parent[a] = b;
            tree.darts.insert(d);
            tree.darts.insert(g.inv(d));
        }
    }
    tree
}

/// Random walk from the root, closed up along the tree.
fn random_loop(r: &mut ChaCha8Rng, g: &Graph, tree: &Subgraph, root: usize) -> Path {
    let mut darts = Vec::new();
    let mut at = root;
    for _ in 0..r.gen_range(1..=8) {
        let star = g.star(at);
        let d = star[r.gen_range(0..star.len())];
        darts.push(d);
        at = g.target(d);
    }
    // tree path back to the root
    let mut back: HashMap<usize, usize> = HashMap::new();
    let mut queue = VecDeque::from([root]);
    let mut seen = BTreeSet::from([root]);
    while let Some(v) = queue.pop_front() {
        for &d in g.star(v) {
            let t = g.target(d);
            if tree.darts.contains(&d) && seen.insert(t) {
                back.insert(t, g.inv(d));
                queue.push_back(t);
            }
        }
    }
    while at != root {
        let d = back[&at];
        darts.push(d);
        at = g.target(d);
    }
    Path { start: root, darts }
}

/// Folds the loops over the base graph itself, labeling by base darts, and
/// returns the rank of the result.
fn folded_loop_rank(g: &Graph, loops: &[Path]) -> usize {
    let mut edges: Vec<(usize, usize, usize)> = Vec::new();
    let mut vertex_count = 1;
    for p in loops {
        let mut at = 0;
        for (k, &d) in p.darts.iter().enumerate() {
            let next = if k + 1 == p.darts.len() {
                0
            } else {
                vertex_count += 1;
                vertex_count - 1
            };
            edges.push((at, d, next));
            at = next;
        }
    }
    let mut parent: Vec<usize> = (0..vertex_count).collect();
    fn find(parent: &mut [usize], v: usize) -> usize {
        if parent[v] != v {
            let root = find(parent, parent[v]);
            parent[v] = root;
        }
        parent[v]
    }
    loop {
        let mut out: HashMap<(usize, usize), usize> = HashMap::new();
        let mut merged = false;
        for &(u, d, v) in &edges {
            let (u, v) = (find(&mut parent, u), find(&mut parent, v));
            for (s, label, t) in [(u, d, v), (v, g.inv(d), u)] {
                match out.get(&(s, label)) {
                    Some(&t2) => {
                        let (a, b) = (find(&mut parent, t2), find(&mut parent, t));
                        if a != b {
                            parent[a] = b;
                            merged = true;
                        }
                    }
                    None => {
                        out.insert((s, label), t);
                    }
                }
            }
        }
        if !merged {
            let vertices: BTreeSet<usize> = (0..vertex_count).map(|v| find(&mut parent, v)).collect();
            let arcs: BTreeSet<(usize, usize, usize)> = edges
                .iter()
                .map(|&(u, d, v)| {
                    let (u, v) = (find(&mut parent, u), find(&mut parent, v));
                    if d < g.inv(d) {
                        (u, d, v)
                    } else {
                        (v, g.inv(d), u)
                    }
                })
                .collect();
            return arcs.len() + 1 - vertices.len();
        }
    }
}

fn c11_excision() {
    let start = Instant::now();
    let mut r = rng(11);
    for _ in 0..50 {
        let base = random_base(&mut r);
        assert_eq!(graph::graph_rank(&base).unwrap(), 2);
        let tree = random_tree(&mut r, &base);
        let root = r.gen_range(0..base.vertex_count());
        let loops: Vec<Path> = (0..r.gen_range(1..=3))
            .map(|_| random_loop(&mut r, &base, &tree, root))
            .collect();
        let (_, words) = lattice_excision(&base, &tree, root, &loops).unwrap();
        let excised = core_from_words(&words, 2).unwrap();
        assert_eq!(excised.subgroup_rank(), folded_loop_rank(&base, &loops));
    }
    within(start, Duration::from_secs(10));
}

#[test]
fn acceptance() {
    let criteria: [(&str, fn()); 11] = [
        ("realization invariants of <xy>", c1_realization),
        ("rank identity on 1000 random cores", c2_rank_identity),
        ("interior vertices and checkers", c3_interior_and_checkers),
        ("Nielsen-Schreier on 200 complete cores", c4_nielsen_schreier),
        ("intersection bound on 1000 random pairs", c5_intersection_bound),
        ("tightness for <a, baB>", c6_tightness),
        ("family separation k = 2..50", c7_family),
        ("double-coset oracle equivalence", c8_double_cosets),
        ("Hall completion on 200 instances", c9_hall_completion),
        ("Galois test and escape witnesses", c10_galois_and_escape),
        ("lattice excision preserves rank", c11_excision),
    ];
    let mut failed = Vec::new();
    for (k, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run));
        let verdict = if outcome.is_ok() { "PASS" } else { "FAIL" };
        println!("acceptance {:>2} {verdict} {name} ({:?})", k + 1, start.elapsed());
        if outcome.is_err() {
            failed.push(k + 1);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
