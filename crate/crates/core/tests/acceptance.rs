//! Acceptance criteria 1-8. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails. Expected values come from hand computation or
//! from oracles written here independently of the library code paths.

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use fmlat::counting::{double_coset_count, nikulin_check, totient_order_bound, twisted_partner_check};
use fmlat::fqf::{fqf_isometric, gauss_sum, ENUMERATION_CAP, GAUSS_TOLERANCE};
use fmlat::isometry::{default_binary_bound, lattice_isometries, Surjectivity};
use fmlat::scenario::{full_manifest, run_batch};
use fmlat::{
    binary_genus_scan, discriminant_form, discriminant_group, fm_count_abelian, is_surjective_on_discriminant,
    orthogonal_complement, parse_lattice_expr, smith_normal_form, BigIntMatrix, GHodgeSpec, IntMatrix, Lattice, SublatticeSpec,
};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn lat(expr: &str) -> Result<Lattice, String> {
    parse_lattice_expr(expr).map_err(|e| format!("{expr}: {e}"))
}

macro_rules! tryf {
    ($e:expr) => {
        $e.map_err(|e| e.to_string())?
    };
}

// ---------------------------------------------------------------------------
// 1. O(U(3))

/// |O(q)| for q(a e* + b f*) = 2ab/3 mod 2 on (Z/3)^2, by trying all 81 matrices.
fn brute_force_o_u3() -> usize {
    let q = |a: i64, b: i64| (2 * a * b).rem_euclid(6);
    let mut count = 0;
    for m in 0..81i64 {
        let (a, b, c, d) = (m % 3, m / 3 % 3, m / 9 % 3, m / 27);
        if (a * d - b * c).rem_euclid(3) == 0 {
            continue;
        }
        let preserves = (0..9).all(|v| {
            let (x, y) = (v % 3, v / 3);
            q(a * x + b * y, c * x + d * y) == q(x, y)
        });
        count += preserves as usize;
    }
    count
}

fn ac1() -> Check {
    let u3 = lat("U(3)")?;
    let iso = tryf!(lattice_isometries(&u3, default_binary_bound(u3.gram())));
    ensure(iso.order() == 4 && iso.complete, || {
        format!("|O(U(3))| = {} complete = {}", iso.order(), iso.complete)
    })?;
    let brute = brute_force_o_u3();
    ensure(brute == 4, || format!("brute-force |O(A)| = {brute}"))?;
    let s = tryf!(is_surjective_on_discriminant(&u3));
    ensure(
        s.status == Surjectivity::Surjective && s.image_order == brute && s.target_order == brute,
        || format!("surjectivity {:?} image {} target {}", s.status, s.image_order, s.target_order),
    )?;
    Ok(format!("|O(U(3))| = 4 complete, image = |O(A)| = {brute} (brute force)"))
}

// ---------------------------------------------------------------------------
// 2. discriminant groups

fn ac2() -> Check {
    let mut cases: Vec<(String, Vec<u64>)> = vec![
        ("U(2)".into(), vec![2, 2]),
        ("U(3)".into(), vec![3, 3]),
        ("E8(-2)".into(), vec![2; 8]),
    ];
    for n in 1..=10u64 {
        cases.push((format!("<{}>", -2 * n as i64), vec![2 * n]));
    }
    for (expr, want) in &cases {
        let l = lat(expr)?;
        let g = tryf!(discriminant_group(&l));
        ensure(&g.cyclic_orders == want, || format!("{expr}: {:?} != {want:?}", g.cyclic_orders))?;
        ensure(g.order() as i64 == l.det().abs(), || format!("{expr}: |A| = {} but det = {}", g.order(), l.det()))?;
    }
    Ok(format!("{} lattices, all |A| = |det|", cases.len()))
}

// ---------------------------------------------------------------------------
// 3. Gauss-Milgram

fn random_unimodular(rng: &mut StdRng, n: usize) -> IntMatrix {
    let mut p = IntMatrix::identity(n);
    if n < 2 {
        return p;
    }
    for _ in 0..2 * n {
        let i = rng.gen_range(0..n);
        let j = (i + rng.gen_range(1..n)) % n;
        let t = rng.gen_range(-1..=1i64);
        // column operation c_j += t c_i
        for r in 0..n {
            p[(r, j)] += t * p[(r, i)];
        }
    }
    p
}

/// A random even block sum of rank <= `max_rank`, expressed in a scrambled basis.
fn random_even_lattice(rng: &mut StdRng, max_rank: usize) -> (String, Lattice) {
    let mut parts: Vec<String> = Vec::new();
    let mut rank = 0;
    loop {
        let block = match rng.gen_range(0..4) {
            0 => (format!("U({})", rng.gen_range(1..=4)), 2),
            1 => {
                let k = *[-2i64, -1, 1, 2].choose(rng).unwrap();
                (format!("E8({k})"), 8)
            }
            2 => (format!("<{}>", 2 * *[-6i64, -5, -4, -3, -2, -1, 1, 2, 3, 4, 5, 6].choose(rng).unwrap()), 1),
            _ => ("U".into(), 2),
        };
        if rank + block.1 > max_rank {
            if rank > 0 {
                break;
            }
            continue;
        }
        rank += block.1;
        parts.push(block.0);
        if rng.gen_bool(0.3) {
            break;
        }
    }
    let expr = parts.join("+");
    let l = parse_lattice_expr(&expr).unwrap();
    let p = random_unimodular(rng, l.rank());
    (expr, l.change_basis(&p).unwrap())
}

fn gm_matches(name: &str, l: &Lattice) -> Result<(), String> {
    let q = tryf!(discriminant_form(l));
    let g = tryf!(gauss_sum(&q));
    let sig = l.signature();
    let want = (sig.positive as i64 - sig.negative as i64).rem_euclid(8) as u8;
    ensure(g.residue == want && g.error <= GAUSS_TOLERANCE, || {
        format!("{name}: residue {} (error {:.2e}) vs signature {want} mod 8", g.residue, g.error)
    })
}

fn ac3() -> Check {
    let mut n = 0;
    let mut constructors: Vec<(String, Lattice)> = Vec::new();
    for k in [-3i64, -2, -1, 1, 2, 3, 4] {
        constructors.push((format!("U({k})"), tryf!(Lattice::hyperbolic(k))));
    }
    for k in [-2i64, -1, 1, 2] {
        constructors.push((format!("E8({k})"), tryf!(Lattice::e8(k))));
    }
    for m in (-12i64..=12).filter(|m| *m != 0 && m % 2 == 0) {
        constructors.push((format!("<{m}>"), tryf!(Lattice::rank_one(m))));
    }
    constructors.push(("K3".into(), tryf!(Lattice::k3())));
    constructors.push(("U^3".into(), tryf!(Lattice::abelian_h2())));
    for (name, l) in &constructors {
        gm_matches(name, l)?;
        n += 1;
    }
    // The Gauss sum is a sum over A_L, so samples are drawn from the range the
    // library accepts (|A_L| <= ENUMERATION_CAP); larger ones are rejected and
    // redrawn rather than reported as mismatches.
    let mut rng = StdRng::seed_from_u64(3);
    let mut rejected = 0;
    let mut sampled = 0;
    while sampled < 20 {
        let (expr, l) = random_even_lattice(&mut rng, 12);
        if l.det().unsigned_abs() > ENUMERATION_CAP {
            rejected += 1;
            continue;
        }
        gm_matches(&expr, &l)?;
        sampled += 1;
        n += 1;
    }
    Ok(format!(
        "{n} lattices ({} constructors, 20 random block sums; {rejected} draws over the |A| cap redrawn)",
        constructors.len()
    ))
}

// ---------------------------------------------------------------------------
// 4. Nikulin

/// F_N embedded in E8(-1)^2 + U^3 (E8 copies at 0..8 and 8..16, U's at 16, 18, 20);
/// returns the orthogonal complement.
fn f_n_transcendental(n: i64) -> Result<Lattice, String> {
    let k3 = tryf!(Lattice::k3());
    let mut gens = Vec::new();
    let mut v = vec![0i64; 22];
    v[16] = 1;
    v[18] = 1;
    gens.push(v.clone());
    let mut v = vec![0i64; 22];
    v[17] = 1;
    v[19] = 1;
    gens.push(v);
    for i in 0..8 {
        let mut v = vec![0i64; 22];
        v[i] = 1;
        v[i + 8] = 1;
        gens.push(v);
    }
    let mut v = vec![0i64; 22];
    v[20] = 1;
    v[21] = -n;
    gens.push(v);
    let spec = tryf!(SublatticeSpec::new(k3, gens));
    let g = tryf!(spec.induced_gram());
    let want = tryf!(parse_lattice_expr(&format!("U(2)+E8(-2)+<{}>", -2 * n)));
    ensure(&g == want.gram(), || format!("F_{n}: induced Gram mismatch"))?;
    tryf!(orthogonal_complement(&spec)).lattice.ok_or_else(|| "empty complement".to_string())
}

fn ac4() -> Check {
    for n in 2..=50 {
        let t = f_n_transcendental(n)?;
        let r = tryf!(nikulin_check(&t));
        ensure(r.hypotheses_hold, || format!("F_{n}: Nikulin hypotheses fail on T (det {})", t.det()))?;
    }
    let r = tryf!(nikulin_check(&lat("U+U(2)+E8(-2)")?));
    ensure(r.hypotheses_hold, || "U+U(2)+E8(-2) fails".into())?;
    let r = tryf!(nikulin_check(&lat("U(3)")?));
    let fails_at_3 = r.condition_a.iter().any(|c| c.p == 3 && !c.holds);
    ensure(fails_at_3 && !r.hypotheses_hold, || "U(3) should fail (a) at p = 3".into())?;
    let c = tryf!(fm_count_abelian(&lat("U(3)")?, &lat("U+U(-3)")?, &GHodgeSpec::PlusMinus));
    ensure(c.total == 1 && c.shortcut.contains("direct"), || {
        format!("U(3) count {} via {}", c.total, c.shortcut)
    })?;
    Ok("F_N (N = 2..50) and U+U(2)+E8(-2) pass; U(3) fails (a) at p = 3 yet counts 1 directly".into())
}

// ---------------------------------------------------------------------------
// 5. binary genus scan

fn ac5() -> Check {
    let scan = tryf!(binary_genus_scan(-9, 5, 10));
    let q_u3 = tryf!(discriminant_form(&lat("U(3)")?));
    let mut matching = 0;
    for c in &scan.classes {
        if tryf!(fqf_isometric(&c.discriminant_form, &q_u3)) {
            matching += 1;
        }
    }
    let reps: Vec<_> = scan.classes.iter().map(|c| c.representative.to_rows()).collect();
    ensure(scan.classes.len() == 4 && matching == 1, || {
        format!("{} classes (expected 4), {matching} with q = q(U(3)); representatives {reps:?}", scan.classes.len())
    })?;
    Ok(format!("4 classes, one with q(U(3)): {reps:?}"))
}

// ---------------------------------------------------------------------------
// 6. twisted partners

fn ac6() -> Check {
    let r = tryf!(twisted_partner_check(&lat("U+U(2)+E8(-2)")?));
    let bound = tryf!(totient_order_bound(12));
    ensure(r.order2_count == 1023 && bound == 42 && r.hodge_bound == 42 && r.partner_exists, || {
        format!("order-2 {} bound {bound}/{} exists {}", r.order2_count, r.hodge_bound, r.partner_exists)
    })?;
    Ok("1023 elements of order 2 > 42 = Hodge isometry order bound".into())
}

// ---------------------------------------------------------------------------
// 7. full manifest

fn ac7() -> Check {
    let manifest = full_manifest();
    let results = run_batch(&manifest);
    for (entry, res) in manifest.iter().zip(&results) {
        let report = res
            .report
            .as_ref()
            .ok_or_else(|| format!("{} {:?}: {}", entry.id, entry.params, res.error.as_deref().unwrap_or("?")))?;
        let c = &report.conclusion;
        let ok = match entry.id.as_str() {
            id if id.starts_with("enriques-") || id == "bielliptic-1" => c.partner_count_bound == "=1",
            "bielliptic-2-rho2" | "bielliptic-34-rho2" | "bielliptic-3-rho3" => {
                c.partner_count_bound == "≤2" && c.partner_set_description == "{A, Â}"
            }
            _ => c.partner_count_bound == "=1",
        };
        ensure(ok, || format!("{} {:?}: {} {}", entry.id, entry.params, c.partner_count_bound, c.partner_set_description))?;
    }
    let ids: BTreeSet<_> = manifest.iter().map(|e| e.id.as_str()).collect();
    Ok(format!("{} entries over {} scenario ids", manifest.len(), ids.len()))
}

// ---------------------------------------------------------------------------
// 8. property suites with independent oracles

fn det_i128(mut a: Vec<Vec<i128>>) -> i128 {
    // Bareiss, with row swaps
    let n = a.len();
    let mut sign = 1;
    let mut prev = 1i128;
    for k in 0..n {
        if a[k][k] == 0 {
            match (k + 1..n).find(|&r| a[r][k] != 0) {
                Some(r) => {
                    a.swap(k, r);
                    sign = -sign;
                }
                None => return 0,
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
        }
        prev = a[k][k];
    }
    sign * a[n - 1][n - 1]
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for first in 0..n {
        for rest in subsets(n, k - 1) {
            if rest.first().is_none_or(|&r| r > first) {
                let mut s = vec![first];
                s.extend(rest);
                out.push(s);
            }
        }
    }
    out
}

/// gcd of all k x k minors.
fn determinantal_divisor(m: &[Vec<i64>], k: usize) -> i128 {
    let rows = subsets(m.len(), k);
    let cols = subsets(m[0].len(), k);
    let mut g = 0i128;
    for r in &rows {
        for c in &cols {
            let sub = r.iter().map(|&i| c.iter().map(|&j| m[i][j] as i128).collect()).collect();
            g = g.gcd(&det_i128(sub));
        }
    }
    g
}

fn check_snf(m: &[Vec<i64>]) -> Result<(), String> {
    let a = tryf!(IntMatrix::from_rows(m));
    let s = smith_normal_form(&a).map_err(|e| format!("{m:?}: {e}"))?;
    let big = BigIntMatrix::from(&a);
    let d = tryf!(tryf!(s.left.mul(&big)).mul(&s.right));
    ensure(d == BigIntMatrix::from(&s.diagonal_matrix()), || format!("U M V != D for {m:?}"))?;
    for (u, ui) in [(&s.left, &s.left_inv), (&s.right, &s.right_inv)] {
        ensure(tryf!(u.determinant()).abs() == BigInt::from(1), || "transform is not unimodular".into())?;
        ensure(tryf!(u.mul(ui)) == BigIntMatrix::identity(u.rows()), || "inverse transform is wrong".into())?;
    }
    let diag = &s.diagonal;
    ensure(diag.iter().all(|&x| x >= 0), || format!("negative diagonal {diag:?}"))?;
    for w in diag.windows(2) {
        ensure(w[1] == 0 || (w[0] != 0 && w[1] % w[0] == 0), || format!("not a divisibility chain {diag:?}"))?;
    }
    // independent oracle: d_1 ... d_k = gcd of k x k minors
    let mut prod = 1i128;
    for (k, &dk) in diag.iter().enumerate() {
        prod *= dk as i128;
        let want = determinantal_divisor(m, k + 1);
        ensure(prod == want, || format!("{m:?}: d_1..d_{} = {prod}, minors gcd {want}", k + 1))?;
    }
    Ok(())
}

fn to_big(r: &fmlat::Rational) -> BigRational {
    BigRational::new(BigInt::from(*r.numer()), BigInt::from(*r.denom()))
}

fn big_mod(x: BigRational, m: i64) -> BigRational {
    let m = BigRational::from_integer(BigInt::from(m));
    let q = (&x / &m).floor();
    x - q * m
}

/// q and b of random lifts of random elements, computed directly in L ⊗ Q.
fn check_lifts(rng: &mut StdRng, l: &Lattice, lifts: usize) -> Result<(), String> {
    let g = tryf!(discriminant_group(l));
    let q = tryf!(discriminant_form(l));
    let n = l.rank();
    let gram: Vec<Vec<BigRational>> = (0..n)
        .map(|i| (0..n).map(|j| BigRational::from_integer(BigInt::from(l.gram()[(i, j)]))).collect())
        .collect();
    let pair = |x: &[BigRational], y: &[BigRational]| {
        let mut acc = BigRational::zero();
        for i in 0..n {
            for j in 0..n {
                acc += &x[i] * &gram[i][j] * &y[j];
            }
        }
        acc
    };
    let random_lift = |rng: &mut StdRng| {
        let coords: Vec<u64> = g.cyclic_orders.iter().map(|&d| rng.gen_range(0..d)).collect();
        let mut v: Vec<BigRational> = (0..n).map(|_| BigRational::from_integer(BigInt::from(rng.gen_range(-4..=4)))).collect();
        for (i, lift) in g.generator_lifts.iter().enumerate() {
            // a different representative of the same class: c + t d
            let c = coords[i] as i64 + g.cyclic_orders[i] as i64 * rng.gen_range(-2..=2);
            for (vj, x) in v.iter_mut().zip(lift) {
                *vj += to_big(x) * BigInt::from(c);
            }
        }
        (coords, v)
    };
    for _ in 0..lifts {
        let (cx, x) = random_lift(rng);
        let (cy, y) = random_lift(rng);
        let qx = big_mod(pair(&x, &x), 2);
        ensure(qx == to_big(&q.q_value(&cx)), || format!("q mismatch at {cx:?}: lift gives {qx}"))?;
        let bxy = big_mod(pair(&x, &y), 1);
        ensure(bxy == to_big(&q.b_value(&cx, &cy)), || format!("b mismatch at {cx:?}, {cy:?}"))?;
    }
    Ok(())
}

type Perm = Vec<u8>;

fn compose(a: &Perm, b: &Perm) -> Perm {
    b.iter().map(|&i| a[i as usize]).collect()
}

fn closure(gens: &[Perm], degree: usize) -> Vec<Perm> {
    let id: Perm = (0..degree as u8).collect();
    let mut set: BTreeSet<Perm> = BTreeSet::from([id]);
    let mut frontier: Vec<Perm> = set.iter().cloned().collect();
    while let Some(x) = frontier.pop() {
        for g in gens {
            let y = compose(&x, g);
            if set.insert(y.clone()) {
                frontier.push(y);
            }
        }
    }
    set.into_iter().collect()
}

fn ambient_groups() -> Vec<(String, Vec<Perm>)> {
    let mut out = Vec::new();
    for n in 3..=5u8 {
        let cycle: Perm = (0..n).map(|i| (i + 1) % n).collect();
        let mut swap: Perm = (0..n).collect();
        swap.swap(0, 1);
        out.push((format!("S{n}"), closure(&[cycle, swap], n as usize)));
    }
    for n in [6u8, 12, 50, 100] {
        let rot: Perm = (0..n).map(|i| (i + 1) % n).collect();
        let refl: Perm = (0..n).map(|i| (n - i) % n).collect();
        out.push((format!("D{n}"), closure(&[rot, refl], n as usize)));
    }
    // S3 x S4 acting on 3 + 4 points, order 144
    let gens: Vec<Perm> = vec![vec![1, 2, 0, 3, 4, 5, 6], vec![1, 0, 2, 3, 4, 5, 6], vec![0, 1, 2, 4, 5, 6, 3], vec![0, 1, 2, 4, 3, 5, 6]];
    out.push(("S3xS4".into(), closure(&gens, 7)));
    out
}

/// Double cosets as connected components of g ~ hg, g ~ gk (union-find).
fn union_find_double_cosets(g: &[Perm], h: &[Perm], k: &[Perm]) -> usize {
    let index = |p: &Perm| g.binary_search(p).expect("element of G");
    let mut parent: Vec<usize> = (0..g.len()).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for (i, x) in g.iter().enumerate() {
        for y in h.iter().map(|a| compose(a, x)).chain(k.iter().map(|b| compose(x, b))) {
            let (a, b) = (find(&mut parent, i), find(&mut parent, index(&y)));
            parent[a] = b;
        }
    }
    (0..g.len()).filter(|&i| find(&mut parent, i) == i).count()
}

fn ac8() -> Check {
    let mut rng = StdRng::seed_from_u64(8);
    for _ in 0..100 {
        let (r, c) = (rng.gen_range(1..=8), rng.gen_range(1..=8));
        let mut m: Vec<Vec<i64>> = (0..r).map(|_| (0..c).map(|_| rng.gen_range(-50..=50)).collect()).collect();
        if r > 1 && rng.gen_bool(0.25) {
            // force a rank drop
            m[r - 1] = m[0].iter().map(|x| -x).collect();
        }
        check_snf(&m)?;
    }
    let mut lifts = 0;
    while lifts < 100 {
        let (_, l) = random_even_lattice(&mut rng, 12);
        if l.det().abs() == 1 {
            continue;
        }
        check_lifts(&mut rng, &l, 5)?;
        lifts += 5;
    }
    let groups = ambient_groups();
    let mut pairs = 0;
    while pairs < 20 {
        let (name, g) = groups.choose(&mut rng).unwrap();
        let degree = g[0].len();
        let sub = |rng: &mut StdRng| {
            let gens: Vec<Perm> = (0..rng.gen_range(1..=2)).map(|_| g.choose(rng).unwrap().clone()).collect();
            closure(&gens, degree)
        };
        let (h, k) = (sub(&mut rng), sub(&mut rng));
        let got = tryf!(double_coset_count(g, &h, &k, compose));
        let want = union_find_double_cosets(g, &h, &k);
        ensure(got.count == want && got.sizes.iter().sum::<usize>() == g.len(), || {
            format!("{name}: |H|={} |K|={}: {} vs oracle {want}", h.len(), k.len(), got.count)
        })?;
        pairs += 1;
    }
    Ok("100 SNFs vs determinantal divisors, 100 lifts vs direct pairing, 20 double-coset pairs vs union-find".into())
}

fn main() -> ExitCode {
    let criteria: [(&str, Duration, fn() -> Check); 8] = [
        ("O(U(3)) and its image in O(A)", Duration::from_secs(1), ac1),
        ("discriminant groups", Duration::from_secs(1), ac2),
        ("Gauss-Milgram vs signature", Duration::from_secs(10), ac3),
        ("Nikulin checker", Duration::from_secs(5), ac4),
        ("binary genus scan det -9", Duration::from_secs(60), ac5),
        ("twisted partner check", Duration::from_secs(1), ac6),
        ("full scenario manifest", Duration::from_secs(30), ac7),
        ("property suites", Duration::from_secs(600), ac8),
    ];
    let mut failed = 0;
    for (i, (name, limit, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = run();
        let elapsed = start.elapsed();
        let verdict = match &result {
            Ok(_) if elapsed <= *limit => "PASS",
            _ => "FAIL",
        };
        let detail = match result {
            Ok(msg) if elapsed <= *limit => msg,
            Ok(msg) => format!("{msg}; too slow (limit {limit:?})"),
            Err(msg) => msg,
        };
        if verdict == "FAIL" {
            failed += 1;
        }
        println!("AC{} {verdict} [{:.3}s] {name}: {detail}", i + 1, elapsed.as_secs_f64());
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
