#![allow(clippy::needless_range_loop)]

//! Acceptance suite: one test per criterion, each printing a PASS/FAIL
//! line (run with `--nocapture` to see them). Every tolerance is pinned
//! in the assertions.

use std::time::Instant;

use convpoly::coeff::Coeff;
use num_traits::{One, Zero};

use convpoly::asympt::{
    self, compare, p_triangle, ratio_n_expansion, ratio_series, symbolic_log_series,
};
use convpoly::family::{
    self, catalog, catalog_log_series, check_convolution, check_derived_convolution,
    check_t_identity_sum, check_t_identity_weighted, rothe_residual, tree_function,
    tree_polynomials,
};
use convpoly::mpoly::MPoly;
use convpoly::rng::SplitMix64;
use convpoly::triangle::{
    extended_entry, iterate_series, lagrange_inverse_triangle, revert, stirling_polynomial,
    ConvolutionTriangle,
};
use convpoly::util::{bernoulli_numbers, binomial_int, factorial_rat};
use convpoly::{rat, rat_int, Int, Rat, Series};

fn triangle_of(name: &str, n_max: usize, param: Option<&Rat>) -> ConvolutionTriangle {
    let f = catalog_log_series(name, n_max, param).unwrap();
    ConvolutionTriangle::from_series(&f, n_max).unwrap()
}

fn assert_tsv(t: &ConvolutionTriangle, expected: &str, what: &str) {
    assert_eq!(t.to_tsv(), expected, "{what} triangle bytes");
}

#[test]
fn c01_triangle_reproduction() {
    let clock = Instant::now();
    let mut timings = Vec::new();

    let mut timed = |name: &str, f: &mut dyn FnMut()| {
        let t0 = Instant::now();
        f();
        let dt = t0.elapsed();
        assert!(dt.as_secs_f64() < 1.0, "{name} took {dt:?}, budget 1 s");
        timings.push(format!("{name} {:.0}ms", dt.as_secs_f64() * 1e3));
    };

    timed("stirling-subset", &mut || {
        assert_tsv(
            &triangle_of("stirling2", 5, None),
            "1\n1\t1\n1\t3\t1\n1\t7\t6\t1\n1\t15\t25\t10\t1",
            "subset",
        );
    });

    timed("stirling-cycle", &mut || {
        assert_tsv(
            &triangle_of("stirling1", 5, None),
            "1\n1\t1\n2\t3\t1\n6\t11\t6\t1\n24\t50\t35\t10\t1",
            "cycle",
        );
    });

    timed("stirling-cycle-signed", &mut || {
        let signed = triangle_of("stirling1", 5, None).scaled(&rat_int(-1), &rat_int(-1));
        assert_tsv(
            &signed,
            "1\n-1\t1\n2\t-3\t1\n-6\t11\t-6\t1\n24\t-50\t35\t-10\t1",
            "signed cycle",
        );
    });

    timed("lah", &mut || {
        assert_tsv(
            &triangle_of("lah", 5, None),
            "1\n2\t1\n6\t6\t1\n24\t36\t12\t1\n120\t240\t120\t20\t1",
            "lah",
        );
    });

    timed("fg-preferential", &mut || {
        let fg = triangle_of("stirling2", 5, None).matmul(&triangle_of("stirling1", 5, None));
        assert_tsv(
            &fg,
            "1\n2\t1\n6\t6\t1\n26\t36\t12\t1\n150\t250\t120\t20\t1",
            "fg",
        );
        assert_eq!(
            fg.row(4).to_vec(),
            vec![rat_int(26), rat_int(36), rat_int(12), rat_int(1)]
        );
        let sums: Vec<Rat> = (1..=5).map(|n| fg.row(n).iter().sum()).collect();
        assert_eq!(
            sums,
            vec![
                rat_int(1),
                rat_int(3),
                rat_int(13),
                rat_int(75),
                rat_int(541)
            ]
        );
    });

    timed("catalan-t2", &mut || {
        let t = triangle_of("catalan-t", 5, Some(&rat_int(2)));
        assert_tsv(
            &t,
            "1\n3\t1\n20\t9\t1\n210\t107\t18\t1\n3024\t1650\t335\t30\t1",
            "catalan",
        );
        assert_eq!(
            t.row(5).to_vec(),
            vec![
                rat_int(3024),
                rat_int(1650),
                rat_int(335),
                rat_int(30),
                rat_int(1)
            ]
        );
    });

    timed("central-factorial", &mut || {
        let t = triangle_of("central-factorial", 8, None);
        assert_tsv(
            &t,
            "1\n0\t1\n1/4\t0\t1\n0\t1\t0\t1\n1/16\t0\t5/2\t0\t1\n0\t1\t0\t5\t0\t1\n\
             1/64\t0\t91/16\t0\t35/4\t0\t1\n0\t1\t0\t21\t0\t14\t0\t1",
            "central factorial",
        );
        // row 7 nonzero pattern at columns 1, 3, 5, 7
        assert_eq!(t.entry(7, 1), rat(1, 64));
        assert_eq!(t.entry(7, 3), rat(91, 16));
        assert_eq!(t.entry(7, 5), rat(35, 4));
        assert_eq!(t.entry(7, 7), rat_int(1));
    });

    timed("tree-polynomials", &mut || {
        let fam = tree_polynomials(8).unwrap();
        assert_eq!(
            fam.to_tsv().lines().take(5).collect::<Vec<_>>().join("\n"),
            "1\n3\t1\n17\t9\t1\n142\t95\t18\t1\n1569\t1220\t305\t30\t1"
        );
        for n in 1..=8usize {
            let sum: Rat = fam.row(n).into_iter().sum();
            assert_eq!(
                sum,
                Rat::from_integer(Int::from(n).pow(n as u32)),
                "row {n} sum"
            );
        }
    });

    println!(
        "criterion  1 PASS: 8 printed triangles reproduced byte-exact ({}; total {:.0}ms)",
        timings.join(", "),
        clock.elapsed().as_secs_f64() * 1e3
    );
}

#[test]
fn c02_half_iterate_fixtures() {
    // columns for q = 1/2
    let s2 = triangle_of("stirling2", 5, None);
    let h2 = s2.power_rat(&rat(1, 2)).unwrap();
    assert_eq!(
        h2.raw().first_column(),
        vec![rat_int(1), rat(1, 2), rat(1, 8), rat_int(0), rat(1, 32)]
    );
    let s1 = triangle_of("stirling1", 5, None);
    let h1 = s1.power_rat(&rat(1, 2)).unwrap();
    assert_eq!(
        h1.raw().first_column(),
        vec![rat_int(1), rat(1, 2), rat(5, 8), rat(5, 4), rat(109, 32)]
    );
    // the full printed square roots
    assert_eq!(
        h2.to_tsv(),
        "1\n1/2\t1\n1/8\t3/2\t1\n0\t5/4\t3\t1\n1/32\t5/8\t5\t5\t1"
    );
    assert_eq!(
        h1.to_tsv(),
        "1\n1/2\t1\n5/8\t3/2\t1\n5/4\t13/4\t3\t1\n109/32\t75/8\t10\t5\t1"
    );
    // squaring reproduces the base triangles exactly at n_max = 8
    for name in ["stirling2", "stirling1"] {
        let t = triangle_of(name, 8, None);
        let h = t.power_rat(&rat(1, 2)).unwrap();
        assert_eq!(h.matmul(&h), t, "square of half-iterate, {name}");
    }
    println!("criterion  2 PASS: half-iterate columns exact; squares reproduce bases at n_max=8");
}

#[test]
fn c03_jabotinsky_consistency() {
    // binomial-series and interpolation-formula powers agree entrywise as
    // polynomials in q at n_max = 8
    for name in ["stirling2", "stirling1", "tree", "lah"] {
        let f = catalog_log_series(name, 8, None).unwrap();
        let t = ConvolutionTriangle::from_series(&f, 8).unwrap();
        let a = t.power_poly().unwrap();
        let b = t.power_poly_interpolation().unwrap();
        assert_eq!(a, b, "{name}: the two q-power formulas disagree");
    }
    // [z^8] f^[q] for f = ln 1/(1-z): linear coefficient -11/241920
    let f = catalog_log_series("log-geometric", 8, None).unwrap();
    let qm = ConvolutionTriangle::from_series(&f, 8)
        .unwrap()
        .power_poly()
        .unwrap();
    let linear = qm.entry(8, 1).coeff(1) / factorial_rat(8);
    assert_eq!(linear, rat(-11, 241920));
    println!("criterion  3 PASS: q-power formulas agree at n_max=8; [z^8] linear coefficient = -11/241920");
}

#[test]
fn c04_closed_form_iteration() {
    // f(z) = z/(1 - c z^k)^{1/k} iterates to z/(1 - q c z^k)^{1/k}
    let order = 12;
    let build = |c: &Rat, k: usize| -> Series {
        let base = &Series::one_series(order - 1) - &Series::monomial(c.clone(), k, order - 1);
        base.pow_rat(&rat(-1, k as i64))
            .unwrap()
            .truncated(order)
            .shift_up(1)
    };
    for (c, k, q) in [
        (rat_int(1), 1usize, rat(1, 2)),
        (rat_int(2), 2, rat(1, 3)),
        (rat_int(1), 3, rat_int(-1)),
    ] {
        let f = build(&c, k);
        let iterated = iterate_series(&f, &q, order).unwrap();
        let expected = build(&(&q * &c), k);
        assert_eq!(iterated, expected, "c={c}, k={k}, q={q}");
    }
    println!(
        "criterion  4 PASS: z/(1-cz^k)^(1/k) iterates in closed form for all three (c,k,q) at N=12"
    );
}

#[test]
fn c05_reversion() {
    let n = 16;
    for name in [
        "binomial",
        "rising",
        "tree",
        "idempotent",
        "central-factorial",
    ] {
        let f = catalog_log_series(name, n, None).unwrap();
        // Lagrange-formula inverse equals the q = -1 matrix power
        let g = revert(&f).unwrap();
        let via_power = iterate_series(&f, &rat_int(-1), n).unwrap();
        assert_eq!(g, via_power, "{name}: Lagrange vs q=-1");
        // and satisfies g(f(z)) = z at N = 16
        assert_eq!(g.compose(&f).unwrap(), Series::z(n), "{name}: composition");
        // GF product is exactly the identity triangle
        let t = ConvolutionTriangle::from_series(&f, n).unwrap();
        let ginv = lagrange_inverse_triangle(&f, n).unwrap();
        assert_eq!(
            ginv.matmul(&t),
            ConvolutionTriangle::identity(n),
            "{name}: GF != I"
        );
    }
    println!("criterion  5 PASS: reversion via Lagrange = q=-1 power, g(f)=z at N=16, GF=I for 5 families");
}

#[test]
fn c06_identity_suite() {
    let clock = Instant::now();
    let mut rng = SplitMix64::new(0xACCE97);
    let mut instances = 0usize;

    let pool = [
        catalog("bell", 6, None).unwrap(),
        catalog("tree", 6, None).unwrap(),
        catalog("binomial", 6, None).unwrap(),
        catalog("catalan-t", 6, Some(&rat_int(2))).unwrap(),
    ];
    for fam in &pool {
        // two-variable convolution
        for _ in 0..20 {
            let n = rng.next_below(7) as usize;
            let x = rng.next_rat(9, 5);
            let y = rng.next_rat(9, 5);
            assert!(check_convolution(fam, n, &x, &y).is_zero());
            instances += 1;
        }
        // derived convolution
        for _ in 0..20 {
            let n = rng.next_below(7) as usize;
            let x = rng.next_rat(9, 5);
            let y = rng.next_rat(9, 5);
            assert!(check_derived_convolution(fam, n, &x, &y).is_zero());
            instances += 1;
        }
        // the Theorem's two t-identities
        let mut done = 0;
        while done < 15 {
            let n = rng.next_below(7) as usize;
            let t = rng.next_rat(6, 4);
            let x = rng.next_rat_nonzero(8, 5);
            let y = rng.next_rat_nonzero(8, 5);
            let (Some(r1), Some(r2)) = (
                check_t_identity_sum(fam, &t, n, &x, &y),
                check_t_identity_weighted(fam, &t, n, &x, &y),
            ) else {
                continue;
            };
            assert!(r1.is_zero() && r2.is_zero());
            done += 1;
            instances += 2;
        }
    }
    // Rothe four-parameter identity
    for _ in 0..40 {
        let n = rng.next_below(9) as usize;
        let t = rng.next_rat(6, 4);
        let x = rng.next_rat(9, 5);
        let y = rng.next_rat(9, 5);
        assert!(rothe_residual(&t, &x, &y, n).is_zero());
        instances += 1;
    }
    // Stirling duality {n brace k} = {-k brack -n} on extended matrices,
    // 0 <= k, n <= 6
    let f1 = catalog_log_series("stirling1", 8, None).unwrap();
    let s2 = triangle_of("stirling2", 6, None);
    for n in 0..=6usize {
        for k in 0..=6usize {
            let lhs = if n == 0 {
                if k == 0 {
                    Rat::one()
                } else {
                    Rat::zero()
                }
            } else {
                s2.entry(n, k)
            };
            let rhs = if k > n {
                Rat::zero() // extension offset would be negative on both sides
            } else {
                extended_entry(&f1, n - k)
                    .unwrap()
                    .eval(&rat_int(-(k as i64)))
            };
            assert_eq!(lhs, rhs, "duality at n={n}, k={k}");
        }
    }
    // Lah symmetry through the extended matrix
    let lah = catalog_log_series("lah", 10, None).unwrap();
    let lah_t = ConvolutionTriangle::from_series(&lah, 6).unwrap();
    for n in 1..=6usize {
        for k in 1..=n {
            let e = extended_entry(&lah, n - k).unwrap();
            assert_eq!(
                lah_t.entry(n, k),
                e.eval(&rat_int(-(k as i64))),
                "lah ({n},{k})"
            );
        }
    }

    let elapsed = clock.elapsed();
    assert!(instances >= 200, "only {instances} random instances");
    assert!(
        elapsed.as_secs_f64() < 10.0,
        "identity suite took {elapsed:?}"
    );
    println!(
        "criterion  6 PASS: {instances} random instances + duality/Lah grids, zero residuals, {:.2}s",
        elapsed.as_secs_f64()
    );
}

#[test]
fn c07_stirling_polynomials() {
    let b = bernoulli_numbers(10);
    for n in 1..=10usize {
        let sigma = stirling_polynomial(n).unwrap();
        let sign = if n % 2 == 0 { Rat::one() } else { -Rat::one() };
        assert_eq!(
            sigma.eval(&Rat::one()),
            sign * &b[n] / factorial_rat(n),
            "sigma_{n}(1)"
        );
        assert_eq!(
            sigma.eval(&Rat::zero()),
            -&b[n] / (rat_int(n as i64) * factorial_rat(n)),
            "sigma_{n}(0)"
        );
    }
    // cycle and subset expressions reproduce the triangles for n <= 8, k <= 4
    let s1 = triangle_of("stirling1", 8, None);
    let s2 = triangle_of("stirling2", 8, None);
    for k in 1..=4usize {
        let sigma = stirling_polynomial(k).unwrap();
        for n in (k + 1)..=8usize {
            let falling: Rat = (0..=k).map(|i| rat_int((n - i) as i64)).product();
            assert_eq!(
                s1.entry(n, n - k),
                falling * sigma.eval(&rat_int(n as i64)),
                "cycle n={n}, k={k}"
            );
            let mut prod = Rat::one();
            for i in 0..=k {
                prod *= rat_int(k as i64 - i as i64 - n as i64);
            }
            assert_eq!(
                s2.entry(n, n - k),
                prod * sigma.eval(&rat_int(k as i64 - n as i64)),
                "subset n={n}, k={k}"
            );
        }
    }
    println!(
        "criterion  7 PASS: sigma boundary values for n<=10; triangle diagonals for n<=8, k<=4"
    );
}

#[test]
fn c08_p_triangle() {
    let t = p_triangle(5).unwrap();
    let expected: Vec<Vec<i64>> = vec![
        vec![1],
        vec![2, 3],
        vec![6, 20, 15],
        vec![24, 130, 210, 105],
        vec![120, 924, 2380, 2520, 945],
    ];
    for (j, row) in expected.iter().enumerate() {
        for (i, v) in row.iter().enumerate() {
            assert_eq!(t.entry(j + 1, i + 1), Int::from(*v));
        }
    }
    // representation identity for k <= 12, j <= 5
    let cycles = triangle_of("stirling1", 12, None);
    for j in 1..=5usize {
        for k in (j + 1)..=12usize {
            let mut sum = Rat::zero();
            for i in 1..=j {
                sum += Rat::from_integer(t.entry(j, i) * binomial_int(k, j + i));
            }
            assert_eq!(sum, cycles.entry(k, k - j), "k={k}, j={j}");
        }
    }
    // normalized values are the triangle of exp(z/2 + z^2/3 + ...)
    let f = Series::from_coeffs(
        (0..=5usize)
            .map(|m| {
                if m == 0 {
                    Rat::zero()
                } else {
                    rat(1, m as i64 + 1)
                }
            })
            .collect(),
    );
    let tri = ConvolutionTriangle::from_series(&f, 5).unwrap();
    for j in 1..=5usize {
        for i in 1..=j {
            let normalized =
                Rat::from_integer(t.entry(j, i)) * factorial_rat(j) / factorial_rat(i + j);
            assert_eq!(normalized, tri.entry(j, i), "normalized ({j},{i})");
        }
    }
    println!(
        "criterion  8 PASS: p_ji rows 1..5 exact; representation k<=12; normalization matches"
    );
}

#[test]
fn c09_asymptotics_exact_ratio_families() {
    // tree: ratio equals x/(x+n) to 1e-10 relative
    let tree = tree_function(64);
    for (n, x) in [(10usize, 100.0f64), (32, 1024.0)] {
        let report = compare(&tree, n, x).unwrap();
        let expected = x / (x + n as f64);
        assert!(
            (report.ratio - expected).abs() <= 1e-10 * expected,
            "tree (n={n}, x={x}): ratio {} vs {expected}",
            report.ratio
        );
    }
    // exp: ratio 1.0 to 1e-12
    let expf = catalog_log_series("exp", 16, None).unwrap();
    let report = compare(&expf, 10, 100.0).unwrap();
    assert!(
        (report.ratio - 1.0).abs() <= 1e-12,
        "exp ratio {}",
        report.ratio
    );
    // binomial: within 1.5/x of (1-y)^{-1/2} for y <= 1/4
    let binom = catalog_log_series("binomial", 288, None).unwrap();
    for (n, x) in [
        (16usize, 256.0f64),
        (64, 256.0),
        (128, 1024.0),
        (256, 1024.0),
    ] {
        let y = n as f64 / x;
        assert!(y <= 0.25 + 1e-12);
        let report = compare(&binom, n, x).unwrap();
        let target = (1.0 - y).powf(-0.5);
        assert!(
            (report.ratio - target).abs() <= 1.5 / x,
            "binomial (n={n}, x={x}): ratio {} vs {target}",
            report.ratio
        );
    }
    println!("criterion  9 PASS: tree ratio = x/(x+n) @1e-10; exp ratio = 1 @1e-12; binomial within 1.5/x of (1-y)^(-1/2)");
}

#[test]
fn c10_ratio_series_structure() {
    // symbolic c[1][0] = -f2/2 and c[2][0] = (11 f2^2 - 4 f3)/8
    let f = symbolic_log_series(3, 8);
    let rs = ratio_series(&f, 2, 0).unwrap();
    let f2 = MPoly::atom(0);
    let f3 = MPoly::atom(1);
    assert_eq!(rs.coeff(1, 0), f2.clone().scale_rat(&rat(-1, 2)));
    assert_eq!(
        rs.coeff(2, 0),
        f2.clone() * f2 * MPoly::constant(rat(11, 8)) + f3 * MPoly::constant(rat(-1, 2))
    );
    // a_ij = 0 for i > j through i + j <= 6 with generic symbolic f2..f4
    let flong = symbolic_log_series(3, 16);
    let a = ratio_n_expansion(&flong, 5).unwrap();
    let mut checked = 0;
    for (i, row) in a.iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            if i > j && i + j <= 6 {
                assert!(v.is_zero(), "a[{i}][{j}] = {v}");
                checked += 1;
            }
        }
    }
    assert!(checked >= 9, "only {checked} vanishing positions checked");
    println!("criterion 10 PASS: symbolic c[1][0], c[2][0] exact; {checked} above-diagonal a_ij vanish through i+j<=6");
}

#[test]
fn c11_corrected_approximation() {
    // As stated: for tree and binomial at fixed y = 1/8, the error of
    // corrected_approx must shrink by a factor in [3.4, 4.6] per
    // doubling of x over {256, 512, 1024}.
    //
    // The binomial family passes. The tree family cannot: its corrected
    // approximation is exact ((1 + s^2 d2/y)^{-1/2} = x/(x+n) identically
    // and the A-term vanishes), so the measured error sits at the f64
    // noise floor (~1e-14) and does not scale. The assertion below is the
    // criterion as stated, so the tree half fails; the printed diagnosis
    // records why.
    let mut failures = Vec::new();
    for name in ["tree", "binomial"] {
        let f = if name == "tree" {
            tree_function(160)
        } else {
            catalog_log_series("binomial", 160, None).unwrap()
        };
        let mut errs = Vec::new();
        for x in [256.0f64, 512.0, 1024.0] {
            let n = (x / 8.0) as usize;
            let report = compare(&f, n, x).unwrap();
            errs.push((report.corrected_over_exact() - 1.0).abs());
        }
        let r1 = errs[0] / errs[1];
        let r2 = errs[1] / errs[2];
        let ok = (3.4..=4.6).contains(&r1) && (3.4..=4.6).contains(&r2);
        if ok {
            println!(
                "criterion 11 ({name}): halving ratios {r1:.2}, {r2:.2} in [3.4, 4.6], errors {errs:?}"
            );
        } else {
            println!(
                "criterion 11 ({name}): FAIL, halving ratios {r1:.2}, {r2:.2}, errors {errs:?}"
            );
            failures.push(name);
        }
    }
    if failures == ["tree"] {
        // supporting evidence that the slope machinery is sound on a
        // family whose remainder is genuinely Theta(x^-2)
        let bell = catalog_log_series("bell", 160, None).unwrap();
        let mut errs = Vec::new();
        for x in [256.0f64, 512.0, 1024.0] {
            let n = (x / 8.0) as usize;
            let report = compare(&bell, n, x).unwrap();
            errs.push((report.corrected_over_exact() - 1.0).abs());
        }
        println!(
            "criterion 11 (bell, supporting): halving ratios {:.2}, {:.2}",
            errs[0] / errs[1],
            errs[1] / errs[2]
        );
        println!(
            "criterion 11 FAIL (tree half): corrected_approx is exact for the tree family \
             (correction factor equals x/(x+n) identically, A-term = 0), so its error is float \
             noise ~1e-14 and has no O(x^-2) slope to measure; binomial half passes"
        );
    }
    assert!(failures.is_empty(), "criterion 11 failed for {failures:?}");
}

#[test]
fn c12_brute_force_oracles() {
    // all 27 self-maps of {0,1,2}; count cycles in the functional graph
    let mut tree_counts = [0u32; 4]; // by number of cycles
    let mut idem_counts = [0u32; 4];
    for code in 0..27u32 {
        let map = [code % 3, (code / 3) % 3, (code / 9) % 3];
        // cyclic elements: e with map^k(e) = e for some 1 <= k <= 3
        let mut cyclic = [false; 3];
        for e in 0..3usize {
            let mut v = e;
            for _ in 0..3 {
                v = map[v] as usize;
                if v == e {
                    cyclic[e] = true;
                    break;
                }
            }
        }
        // count distinct cycles: follow each cyclic element to its cycle
        // minimum and count elements that are their own cycle minimum
        let mut cycles = 0;
        for e in 0..3usize {
            if !cyclic[e] {
                continue;
            }
            let mut min = e;
            let mut v = map[e] as usize;
            while v != e {
                min = min.min(v);
                v = map[v] as usize;
            }
            if min == e {
                cycles += 1;
            }
        }
        tree_counts[cycles] += 1;
        let idempotent = (0..3).all(|i| map[map[i] as usize] == map[i]);
        if idempotent {
            idem_counts[cycles] += 1;
        }
    }
    // tree polynomial row 3: t_{3k} counts maps with k cycles
    let tp = tree_polynomials(3).unwrap();
    let row = tp.row(3);
    for k in 1..=3usize {
        assert_eq!(row[k - 1], rat_int(tree_counts[k] as i64), "tree t_3{k}");
    }
    assert_eq!(row, vec![rat_int(17), rat_int(9), rat_int(1)]);
    // idempotent row 3
    let idem = family::idempotent_polynomials(3).unwrap();
    let row = idem.row(3);
    for k in 1..=3usize {
        assert_eq!(
            row[k - 1],
            rat_int(idem_counts[k] as i64),
            "idempotent ({k})"
        );
    }
    assert_eq!(row, vec![rat_int(3), rat_int(6), rat_int(1)]);
    println!("criterion 12 PASS: rows n=3 match exhaustive enumeration of all 27 self-maps");
}

// supporting check used by criterion 9/11 style comparisons elsewhere:
// the predictor from the ratio series tracks the measured ratio
#[test]
fn ratio_series_predicts_measured_ratio() {
    // |prediction(i<=2, j=0) - ratio| <= K (y^3 + 1/x) for y <= 1/8, with
    // the empirical constant K = 2 (the spec fixes no constant).
    for name in ["tree", "binomial", "bell"] {
        let f = match name {
            "tree" => tree_function(64),
            "binomial" => catalog_log_series("binomial", 64, None).unwrap(),
            _ => catalog_log_series("bell", 64, None).unwrap(),
        };
        let rs = ratio_series(&f.truncated(13), 2, 0).unwrap();
        for (n, x) in [(4usize, 64.0f64), (8, 64.0), (16, 256.0), (32, 256.0)] {
            let y = n as f64 / x;
            assert!(y <= 0.125 + 1e-12);
            let report = asympt::compare(&f, n, x).unwrap();
            let predicted = rs.eval_y_only(y, 2);
            let budget = 2.0 * (y.powi(3) + 1.0 / x);
            assert!(
                (predicted - report.ratio).abs() <= budget,
                "{name} (n={n}, x={x}): predicted {predicted}, measured {}",
                report.ratio
            );
        }
    }
    println!(
        "supporting PASS: truncated ratio series predicts measured ratios within 2(y^3 + 1/x)"
    );
}
