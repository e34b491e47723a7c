//! End-to-end acceptance suite. Runs every criterion, prints one PASS/FAIL
//! line per criterion, and exits nonzero if any fails.

mod common;

use std::collections::BTreeMap;
use std::panic::{self, AssertUnwindSafe};
use std::time::{Duration, Instant};

use ainfty_core::ainfty_persistence::{interval_decomposition, kappa_barcode, KappaEngine, PersistenceModule, TopN};
use ainfty_core::filtration_builders::{cech_filtration, infer, lower_star, PointCloud};
use ainfty_core::fixtures;
use ainfty_core::metrics::{bottleneck, bottleneck_barcodes, hausdorff, interleaving, sup_distance, PersistenceDiagram};
use ainfty_core::reduction::{barcode, Barcode, Extended, Interval};
use ainfty_core::transfer::{build_contraction, transfer_delta};
use ainfty_core::{ratio, Exact, FilteredComplex, PrimeField, SparseMatrix};
use common::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn e(s: &str) -> Exact {
    s.parse().expect("valid literal")
}

fn finite(s: &str) -> Extended {
    Extended::Finite(e(s))
}

fn within(elapsed: Duration, limit: Duration) -> Result<(), String> {
    ensure(elapsed < limit, || format!("took {:?}, limit {:?}", elapsed, limit))
}

fn worked_diagrams() -> (Barcode, Barcode) {
    let v = Barcode::from_intervals(vec![Interval::finite(e("1"), e("6")), Interval::finite(e("9"), e("10"))]);
    let w = Barcode::from_intervals(vec![Interval::finite(e("2"), e("6.8"))]);
    (v, w)
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let (v, w) = worked_diagrams();
    let db = bottleneck(&PersistenceDiagram::from_barcode(&v), &PersistenceDiagram::from_barcode(&w));
    ensure(db == finite("1"), || format!("d_B = {db}"))?;
    let f = PrimeField::F2;
    let di = interleaving(&PersistenceModule::from_barcode(f, &v), &PersistenceModule::from_barcode(f, &w));
    ensure(di == finite("1"), || format!("d_I = {di}"))?;
    within(start.elapsed(), Duration::from_secs(1))?;
    Ok(format!("d_B = {db}, d_I = {di}"))
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    let f = PrimeField::F2;
    let (torus, wedge) = (fixtures::torus_filtration(), fixtures::wedge_filtration());
    let bar = vec![Interval::finite(e("1"), e("3"))];
    let (ht, hw) = (barcode(&torus, f, 2, true), barcode(&wedge, f, 2, true));
    ensure(ht.intervals == bar && hw.intervals == bar, || format!("H_2 barcodes {ht} and {hw}"))?;
    let classical = bottleneck_barcodes(&ht, &hw);
    ensure(classical == finite("0"), || format!("classical d_B = {classical}"))?;
    let kt = kappa_barcode(&torus, f, 2, 2).map_err(|x| x.to_string())?;
    let kw = kappa_barcode(&wedge, f, 2, 2).map_err(|x| x.to_string())?;
    ensure(kt.is_empty() && kw.intervals == bar, || format!("kernel barcodes {kt} and {kw}"))?;
    let d = bottleneck_barcodes(&kt, &kw);
    ensure(d == finite("1"), || format!("kernel d_B = {d}"))?;
    within(start.elapsed(), Duration::from_secs(10))?;
    Ok(format!("classical d_B = 0, kernel barcodes {kt} vs {kw}, d_B = {d}"))
}

fn criterion_3_complexes() -> Vec<FilteredComplex> {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    (0..100)
        .map(|i| if i % 3 == 0 { random_torus_complex(&mut rng, 200) } else { random_complex(&mut rng, 3, 200) })
        .collect()
}

fn criterion_3() -> Outcome {
    let complexes = criterion_3_complexes();
    let mut checked = 0;
    for (i, k) in complexes.iter().enumerate() {
        for p in [2, 5] {
            let c = build_contraction(k, None, field(p), i as u64);
            c.verify().map_err(|x| format!("complex {i} over F_{p}: {x}"))?;
            checked += 1;
        }
    }
    let largest = complexes.iter().map(FilteredComplex::len).max().unwrap_or(0);
    Ok(format!("{checked} contractions verified, largest complex {largest} simplices"))
}

fn criterion_4() -> Outcome {
    let mut checked = 0;
    let (mut with_d2, mut with_d3) = (0, 0);
    for (i, k) in criterion_3_complexes().iter().enumerate() {
        let c = build_contraction(k, None, PrimeField::F2, i as u64);
        let a = transfer_delta(&c, 3).map_err(|x| x.to_string())?;
        let reduced = a.reduce_to_positive_degrees().map_err(|x| x.to_string())?;
        with_d2 += usize::from(!reduced.delta_is_zero(2));
        with_d3 += usize::from(!reduced.delta_is_zero(3));
        for n in 1..=4 {
            let residual = a.stasheff_residual(n).map_err(|x| x.to_string())?;
            ensure(residual.iter().all(BTreeMap::is_empty), || format!("complex {i}: SI({n}) nonzero"))?;
            checked += 1;
        }
    }
    Ok(format!("{checked} identities verified; reduced Δ_2 nonzero on {with_d2}, reduced Δ_3 nonzero on {with_d3} structures"))
}

fn criterion_5() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let f = PrimeField::F2;
    let (mut checks, mut proper, mut beyond) = (0, 0, 0);
    for trial in 0..25 {
        let k = if trial % 2 == 0 { random_torus_complex(&mut rng, 80) } else { random_complex(&mut rng, 3, 60) };
        let engines: Vec<KappaEngine> = [0u64, 17, 91].iter().map(|&s| KappaEngine::new(&k, f, s)).collect();
        for t in k.grades() {
            for n in 2..=3 {
                for p in 0..=3 {
                    let at: Vec<_> = engines
                        .iter()
                        .map(|en| en.kappa_at(&t, n, p))
                        .collect::<Result<_, _>>()
                        .map_err(|x| x.to_string())?;
                    let verdicts: Vec<bool> = at.iter().map(|x| x.top_n == TopN::Verified).collect();
                    ensure(verdicts.windows(2).all(|w| w[0] == w[1]), || {
                        format!("trial {trial}, grade {t}, n = {n}: vanishing of lower operations depends on the matching")
                    })?;
                    if !verdicts[0] {
                        // n exceeds the k-invariant at this grade.
                        beyond += 1;
                        continue;
                    }
                    let dims: Vec<usize> = at.iter().map(|x| x.dimension()).collect();
                    let reduced_h = at[0].basis.dimension() - usize::from(p == 0 && at[0].basis.dimension() > 0);
                    proper += usize::from(dims[0] < reduced_h);
                    ensure(dims.windows(2).all(|w| w[0] == w[1]), || {
                        format!("trial {trial}, grade {t}, n = {n}, p = {p}: kernel dimensions {dims:?}")
                    })?;
                    checks += 1;
                }
            }
        }
    }
    Ok(format!("{checks} kernel dimensions agree across 3 matchings ({proper} proper kernels, {beyond} skipped above the k-invariant)"))
}

fn criterion_6() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let field = PrimeField::F2;
    let mut worst = String::new();
    for trial in 0..200 {
        let nv = rng.gen_range(4..=8);
        let simplices = random_simplices(&mut rng, nv, 3, 60);
        let fv: BTreeMap<u32, Exact> = (0..nv).map(|v| (v, Exact::from_rational(small_rational(&mut rng, 20, 4)))).collect();
        let delta = Exact::from_rational(small_rational(&mut rng, 8, 8));
        let pinned = rng.gen_range(0..nv);
        let gv: BTreeMap<u32, Exact> = fv
            .iter()
            .map(|(&v, x)| {
                let k = if v == pinned { 4 } else { rng.gen_range(-4..=4) };
                (v, x + &delta.mul_rational(&ratio(k, 4)))
            })
            .collect();
        let sup = sup_distance(&fv, &gv).map_err(|x| x.to_string())?;
        ensure(sup == delta, || format!("trial {trial}: sup distance {sup} != {delta}"))?;
        let kf = lower_star(&simplices, &fv).map_err(|x| x.to_string())?;
        let kg = lower_star(&simplices, &gv).map_err(|x| x.to_string())?;
        for p in 0..=2 {
            let bf = kappa_barcode(&kf, field, 2, p).map_err(|x| x.to_string())?;
            let bg = kappa_barcode(&kg, field, 2, p).map_err(|x| x.to_string())?;
            let d = bottleneck_barcodes(&bf, &bg);
            ensure(d <= Extended::Finite(delta.clone()), || format!("trial {trial}, p = {p}: d_B = {d} > {delta}"))?;
            if trial == 199 {
                worst = format!("last trial p = {p}: d_B = {d} <= {delta}");
            }
        }
    }
    Ok(format!("600 comparisons hold; {worst}"))
}

fn criterion_7() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let field = PrimeField::F2;
    for trial in 0..50 {
        let n = rng.gen_range(4..=30);
        let p: Vec<Vec<_>> = (0..n).map(|_| vec![small_rational(&mut rng, 40, 4), small_rational(&mut rng, 40, 4)]).collect();
        let q: Vec<Vec<_>> = p
            .iter()
            .map(|x| x.iter().map(|c| c + ratio(rng.gen_range(-3..=3), 8)).collect())
            .collect();
        let dh = hausdorff(&p, &q).map_err(|x| x.to_string())?;
        let (cp, cq) = (PointCloud::Euclidean(p), PointCloud::Euclidean(q));
        let kp = cech_filtration(&cp, 2, None).map_err(|x| x.to_string())?.with_skeleton_cap(2);
        let kq = cech_filtration(&cq, 2, None).map_err(|x| x.to_string())?.with_skeleton_cap(2);
        for deg in 0..=1 {
            let bp = kappa_barcode(&kp, field, 2, deg).map_err(|x| x.to_string())?;
            let bq = kappa_barcode(&kq, field, 2, deg).map_err(|x| x.to_string())?;
            let d = bottleneck_barcodes(&bp, &bq);
            ensure(d <= Extended::Finite(dh.clone()), || format!("trial {trial}, p = {deg}: d_B = {d} > d_H = {dh}"))?;
        }
    }
    Ok("100 comparisons hold".to_string())
}

fn criterion_8() -> Outcome {
    let start = Instant::now();
    let f = PrimeField::F2;
    let eps = e("0.25");
    let zero = ratio(0, 1);
    let one = ratio(1, 1);
    let circle = PointCloud::circle(20, (zero.clone(), zero.clone()), one.clone());
    let PointCloud::Euclidean(mut two) = PointCloud::circle(20, (zero.clone(), zero.clone()), one.clone()) else {
        unreachable!()
    };
    let PointCloud::Euclidean(second) = PointCloud::circle(20, (ratio(5, 1), zero), one) else { unreachable!() };
    two.extend(second);
    let two = PointCloud::Euclidean(two);
    let c1 = infer(&circle, 2, 1, &eps, f).map_err(|x| x.to_string())?.count;
    let c2 = infer(&two, 2, 1, &eps, f).map_err(|x| x.to_string())?.count;
    let c3 = infer(&circle, 2, 2, &eps, f).map_err(|x| x.to_string())?.count;
    ensure((c1, c2, c3) == (1, 2, 0), || format!("counts {c1}, {c2}, {c3}"))?;
    within(start.elapsed(), Duration::from_secs(30))?;
    Ok(format!("counts {c1}, {c2}, {c3} in {:?}", start.elapsed()))
}

/// Multiset of intervals from ranks of all composites, over every grade.
fn inclusion_exclusion(grades: &[Exact], dims: &[usize], maps: &[Vec<Vec<u64>>], p: u64) -> Vec<Interval> {
    let k = grades.len();
    let mut r = vec![vec![0i64; k]; k];
    for i in 0..k {
        let mut acc: Vec<Vec<u64>> = (0..dims[i]).map(|a| (0..dims[i]).map(|b| u64::from(a == b)).collect()).collect();
        r[i][i] = dims[i] as i64;
        for j in (i + 1)..k {
            acc = dense_mul(&maps[j - 1], &acc, dims[j - 1], dims[i], p);
            r[i][j] = dense_rank(acc.clone(), p) as i64;
        }
    }
    let rank = |i: isize, j: usize| if i < 0 { 0 } else { r[i as usize][j] };
    let mut out = Vec::new();
    for i in 0..k {
        let ii = i as isize;
        for j in (i + 1)..k {
            let m = rank(ii, j - 1) - rank(ii, j) - rank(ii - 1, j - 1) + rank(ii - 1, j);
            out.extend((0..m).map(|_| Interval::finite(grades[i].clone(), grades[j].clone())));
        }
        let m = rank(ii, k - 1) - rank(ii - 1, k - 1);
        out.extend((0..m).map(|_| Interval::infinite(grades[i].clone())));
    }
    out.sort();
    out
}

fn criterion_9() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut bars = 0;
    for trial in 0..1000 {
        let p = [2u64, 3, 5][rng.gen_range(0..3)];
        let k = rng.gen_range(1..=6);
        let grades: Vec<Exact> = (0..k).map(|i| Exact::from_integer(i as i64)).collect();
        let dims: Vec<usize> = (0..k).map(|_| rng.gen_range(0..=4)).collect();
        let maps: Vec<Vec<Vec<u64>>> = (1..k)
            .map(|j| {
                let sparse = rng.gen_bool(0.5);
                (0..dims[j])
                    .map(|_| {
                        (0..dims[j - 1])
                            .map(|_| if sparse && rng.gen_bool(0.6) { 0 } else { rng.gen_range(0..p) })
                            .collect()
                    })
                    .collect()
            })
            .collect();
        let f = field(p);
        let sparse_maps: Vec<SparseMatrix> = maps
            .iter()
            .enumerate()
            .map(|(j, m)| {
                let data: Vec<Vec<i64>> = m.iter().map(|row| row.iter().map(|&x| x as i64).collect()).collect();
                SparseMatrix::from_dense(&data, dims[j], f)
            })
            .collect();
        let module = PersistenceModule::new(f, grades.clone(), dims.clone(), sparse_maps).map_err(|x| x.to_string())?;
        let got = interval_decomposition(&module).intervals;
        let want = inclusion_exclusion(&grades, &dims, &maps, p);
        ensure(got == want, || format!("trial {trial}: {got:?} vs {want:?}"))?;
        bars += got.len();
    }
    Ok(format!("1000 modules, {bars} intervals matched"))
}

fn random_diagram(rng: &mut ChaCha8Rng, infinite: usize) -> Vec<Interval> {
    let n = rng.gen_range(infinite..=6);
    (0..n)
        .map(|i| {
            let b = small_rational(rng, 16, 2);
            let len = ratio(rng.gen_range(1..=12), 2);
            if i < infinite {
                Interval::infinite(Exact::from_rational(b))
            } else {
                Interval::finite(Exact::from_rational(b.clone()), Exact::from_rational(b + len))
            }
        })
        .collect()
}

fn criterion_10() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut infinite = 0;
    for trial in 0..200 {
        let ia = rng.gen_range(0..=2);
        let ib = if rng.gen_bool(0.8) { ia } else { rng.gen_range(0..=2) };
        let (a, b) = (random_diagram(&mut rng, ia), random_diagram(&mut rng, ib));
        let got = bottleneck(&PersistenceDiagram::new(a.clone()), &PersistenceDiagram::new(b.clone()));
        let want = brute_force_bottleneck(&a, &b).map_or(Extended::PosInf, Extended::Finite);
        ensure(got == want, || format!("trial {trial}: matcher {got}, brute force {want}"))?;
        if got == Extended::PosInf {
            infinite += 1;
        }
    }
    Ok(format!("200 pairs agree ({infinite} at infinity)"))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("bottleneck and interleaving of the worked example", criterion_1),
        ("torus versus wedge kernel barcodes", criterion_2),
        ("contraction side conditions", criterion_3),
        ("Stasheff identities", criterion_4),
        ("independence of the matching", criterion_5),
        ("stability for functions", criterion_6),
        ("stability for point clouds", criterion_7),
        ("inference counts", criterion_8),
        ("interval decomposition oracle", criterion_9),
        ("bottleneck oracle", criterion_10),
    ];
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = panic::catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panicked".to_string()))
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS  {name} ({detail}; {secs:.2}s)", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name} ({detail}; {secs:.2}s)", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
