//! Acceptance runner: one PASS/FAIL line per criterion, with the measured
//! runtime against its limit. Exits 0 regardless unless
//! `ACCEPTANCE_STRICT=1` is set, so the rest of the test suite still runs.

use std::collections::BTreeSet;
use std::io::Write;
use std::time::{Duration, Instant};

use lexgames::gen::{
    all_lassos, random_chain, random_game, random_lasso, random_machine, random_ordinal, rng,
    GameParams,
};
use lexgames::graph::{
    chain_graph, check_monotone, check_partial_order, directed_sum, lex_product, loop_graph,
    morphism_check, morphism_search, order_isomorphic_identical,
};
use lexgames::reductions::{
    chain_reduction, cobuchi_sem, double_map, limit_collapse, op_max, op_min, op_union,
    pointwise_leq, priority_image, successor_step,
};
use lexgames::solver::{oracle_solve, verify_strategy, AutoCache, DEFAULT_STRATEGY_BUDGET};
use lexgames::universal::{
    embed_product, power_graph, signature_graph, sum_morphism, wrap_top, PowerLevel,
};
use lexgames::verify::{
    check_almost_universality, check_universality, graph_count, graph_from_index,
    satisfies_bounded, satisfies_exact, UniversalityOptions,
};
use lexgames::words::limsup_index;
use lexgames::{
    Colour, ColourFamily, LassoWord, Morphism, ObjectiveExpr, OrderedGraph, Ordinal, Parity,
    PowerGraph,
};
use rand::Rng;
use rayon::prelude::*;

type Outcome = Result<String, String>;

/// Name, time limit in seconds, check.
type Criterion = (&'static str, u64, fn() -> Outcome);

fn obj(s: &str) -> ObjectiveExpr {
    s.parse().unwrap()
}

fn ord(s: &str) -> Ordinal {
    s.parse().unwrap()
}

fn fam(indices: impl IntoIterator<Item = u64>) -> ColourFamily {
    ColourFamily::singletons(indices)
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn e2s<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

// 1 ------------------------------------------------------------------------

/// Coefficients of ω², ω¹, ω⁰.
fn coeffs(a: &Ordinal) -> [u64; 3] {
    let mut v = [0; 3];
    for (e, c) in a.terms() {
        v[2 - e.as_nat().unwrap() as usize] = *c;
    }
    v
}

fn oracle_add(a: [u64; 3], b: [u64; 3]) -> [u64; 3] {
    match b.iter().position(|&c| c != 0) {
        None => a,
        Some(d) => {
            let mut r = [0; 3];
            r[..d].copy_from_slice(&a[..d]);
            r[d] = a[d] + b[d];
            r[d + 1..].copy_from_slice(&b[d + 1..]);
            r
        }
    }
}

fn criterion_1() -> Outcome {
    let mut r = rng(1);
    let mut absorbed = 0;
    for i in 0..1000 {
        let a = random_ordinal(&mut r, 3, 3, 5);
        let b = random_ordinal(&mut r, 3, 3, 5);
        let c = random_ordinal(&mut r, 3, 3, 5);
        let ctx = || format!("triple {i}: {a}, {b}, {c}");
        ensure(a.cmp(&b) == coeffs(&a).cmp(&coeffs(&b)), || {
            format!("order disagrees with oracle, {}", ctx())
        })?;
        ensure(
            [a < b, a == b, a > b].iter().filter(|&&x| x).count() == 1,
            || format!("trichotomy, {}", ctx()),
        )?;
        if a <= b && b <= c {
            ensure(a <= c, || format!("transitivity, {}", ctx()))?;
        }
        let left = a.add(&b).add(&c);
        let right = a.add(&b.add(&c));
        ensure(left == right, || format!("associativity, {}", ctx()))?;
        ensure(
            coeffs(&left) == oracle_add(oracle_add(coeffs(&a), coeffs(&b)), coeffs(&c)),
            || format!("sum disagrees with oracle, {}", ctx()),
        )?;
        if let (Some((ea, _)), Some((eb, _))) = (a.terms().first(), b.terms().first()) {
            if ea < eb {
                absorbed += 1;
                ensure(a.add(&b) == b, || format!("left absorption, {}", ctx()))?;
            }
        }
        ensure(a.succ().parity() != a.parity(), || {
            format!("parity flip, {}", ctx())
        })?;
    }
    ensure(ord("w").parity() == Parity::Even, || {
        "parity(ω) is not even".into()
    })?;
    ensure(ord("w+3").parity() == Parity::Odd, || {
        "parity(ω+3) is not odd".into()
    })?;
    Ok(format!(
        "1000 triples below ω³, {absorbed} absorption cases"
    ))
}

// 2 ------------------------------------------------------------------------

fn criterion_2() -> Outcome {
    let opts = UniversalityOptions::default();
    let f0 = fam([0]);
    let f1 = fam([1]);
    let tw = check_universality(&loop_graph(&f0), &obj("TW@0"), &f0, 2, &opts).map_err(e2s)?;
    let chain = chain_graph(&f1, 3).map_err(e2s)?;
    let tl = check_universality(&chain, &obj("TL@1"), &f1, 2, &opts).map_err(e2s)?;
    ensure(tw.passed(), || {
        format!("loop vs TW: {} failures", tw.failure_count)
    })?;
    ensure(tl.passed(), || {
        format!("chain(3) vs TL: {} failures", tl.failure_count)
    })?;
    Ok(format!(
        "loop/TW {} graphs ({} satisfying), chain(3)/TL {} graphs ({} satisfying)",
        tw.checked_count, tw.satisfying_count, tl.checked_count, tl.satisfying_count
    ))
}

// 3 ------------------------------------------------------------------------

fn criterion_3() -> Outcome {
    let product = lex_product(
        &lex_product(
            &loop_graph(&fam([0])),
            &chain_graph(&fam([1]), 3).map_err(e2s)?,
        )
        .map_err(e2s)?,
        &loop_graph(&fam([2])),
    )
    .map_err(e2s)?;
    let u = wrap_top(&product, 2).map_err(e2s)?;
    let r = check_universality(
        &u,
        &obj("Parity(2)"),
        &fam(0..3),
        2,
        &UniversalityOptions::default(),
    )
    .map_err(e2s)?;
    ensure(r.passed(), || {
        format!("{} of {} graphs fail", r.failure_count, r.checked_count)
    })?;
    Ok(format!(
        "{} vertices, {} candidates, {} satisfying",
        u.len(),
        r.checked_count,
        r.satisfying_count
    ))
}

// 4 ------------------------------------------------------------------------

fn criterion_4() -> Outcome {
    let mut notes = Vec::new();
    for (alpha, kappa, n) in [
        (1u64, 2usize, 1usize),
        (2, 2, 1),
        (2, 3, 2),
        (3, 2, 2),
        (4, 2, 2),
    ] {
        let tag = format!("(α={alpha}, κ={kappa}, n={n})");
        let w = ObjectiveExpr::MaxParity(Ordinal::nat(alpha));
        let colours = fam(0..alpha);
        let sig = signature_graph(alpha, kappa).map_err(e2s)?;
        ensure(check_monotone(&sig).ok, || format!("{tag} not monotone"))?;
        ensure(sig.linear_ranks().is_some(), || {
            format!("{tag} not totally ordered")
        })?;
        let sat = satisfies_exact(&sig, &w).map_err(e2s)?;
        ensure(sat.satisfied, || {
            format!("{tag} violates MaxParity: {:?}", sat.witness)
        })?;
        let opts = UniversalityOptions::default();
        let almost = check_almost_universality(&sig, &w, &colours, n, &opts).map_err(e2s)?;
        ensure(almost.passed(), || {
            format!("{tag} not almost universal: {:?}", almost.failures.first())
        })?;
        let wrapped = wrap_top(&sig, n).map_err(e2s)?;
        let full = check_universality(&wrapped, &w, &colours, n, &opts).map_err(e2s)?;
        ensure(full.passed(), || {
            format!("{tag} wrap not universal: {:?}", full.failures.first())
        })?;
        notes.push(format!("{tag}: {} graphs", almost.checked_count));
    }
    Ok(notes.join("; "))
}

// 5 ------------------------------------------------------------------------

fn criterion_5() -> Outcome {
    let mut problems = Vec::new();
    for alpha in [0u64, 2] {
        for kappa in [2usize, 3] {
            let next = signature_graph(alpha + 1, kappa).map_err(e2s)?;
            let chain = chain_graph(&fam([alpha]), kappa).map_err(e2s)?;
            let product =
                lex_product(&signature_graph(alpha, kappa).map_err(e2s)?, &chain).map_err(e2s)?;
            if let Err(why) = order_isomorphic_identical(&next, &product) {
                problems.push(format!(
                    "α={alpha} κ={kappa}: |U_<α+1| = {}, |U_<α ⋉ chain| = {} ({why})",
                    next.len(),
                    product.len()
                ));
            }
        }
    }
    if problems.is_empty() {
        Ok("4 instances identical".into())
    } else {
        Err(problems.join("; "))
    }
}

// 6-8 ----------------------------------------------------------------------

fn level(index: u64, base: Option<usize>) -> PowerLevel {
    let f = fam([index]);
    let g = match base {
        None => loop_graph(&f),
        Some(k) => chain_graph(&f, k).unwrap(),
    };
    PowerLevel::new(g).unwrap()
}

/// Levels for MinParity(2) (loop, chain(κ)) or ω-Büchi(2) (loop, loop).
fn levels(min_parity: bool, kappa: usize) -> Vec<PowerLevel> {
    vec![level(0, None), level(1, min_parity.then_some(kappa))]
}

fn power_cases() -> Vec<(&'static str, bool, usize)> {
    vec![
        ("MinParity(2)", true, 2),
        ("MinParity(2)", true, 3),
        ("omegaBuchi(2)", false, 2),
        ("omegaBuchi(2)", false, 3),
    ]
}

fn criterion_6() -> Outcome {
    let mut count = 0;
    for (w, min_parity, kappa) in power_cases() {
        for beta in 1..=3 {
            let tag = format!("{w} κ={kappa} β={beta}");
            let pg = power_graph(levels(min_parity, kappa), beta).map_err(e2s)?;
            let order = check_partial_order(&pg.graph);
            ensure(order.antisymmetric, || format!("{tag}: not antisymmetric"))?;
            ensure(order.total, || format!("{tag}: not total"))?;
            ensure(check_monotone(&pg.graph).ok, || {
                format!("{tag}: not monotone")
            })?;
            pg.check_edge_property()
                .map_err(|e| format!("{tag}: {e}"))?;
            pg.check_vertex_condition()
                .map_err(|e| format!("{tag}: {e}"))?;
            let sat = satisfies_exact(&pg.graph, &obj(w)).map_err(e2s)?;
            ensure(sat.satisfied, || {
                format!("{tag}: cycle criterion fails: {:?}", sat.witness)
            })?;
            count += 1;
        }
    }
    Ok(format!("{count} power graphs"))
}

fn criterion_7() -> Outcome {
    let mut notes = Vec::new();
    for (w, min_parity, kappa) in power_cases() {
        let pg = power_graph(levels(min_parity, kappa), 3).map_err(e2s)?;
        let u = wrap_top(&pg.graph, 2).map_err(e2s)?;
        let r = check_universality(&u, &obj(w), &fam(0..2), 2, &UniversalityOptions::default())
            .map_err(e2s)?;
        ensure(r.passed(), || {
            format!(
                "{w} κ={kappa}: {} failures, first:\n{}",
                r.failure_count, r.failures[0].graph
            )
        })?;
        notes.push(format!(
            "{w} κ={kappa}: {} vertices, {} graphs",
            u.len(),
            r.checked_count
        ));
    }
    Ok(notes.join("; "))
}

fn criterion_8() -> Outcome {
    let mut embeds = 0;
    for (_, min_parity, kappa) in power_cases() {
        let lv = levels(min_parity, kappa);
        for (bl, br) in [(1, 1), (1, 2), (2, 1)] {
            let left = power_graph(vec![lv[0].clone()], bl).map_err(e2s)?;
            let right = power_graph(vec![lv[1].clone()], br).map_err(e2s)?;
            let whole = power_graph(lv.clone(), bl + br).map_err(e2s)?;
            let (product, phi) = embed_product(&left, &right, &whole).map_err(e2s)?;
            let bad = morphism_check(&product, &whole.graph, &phi).map_err(e2s)?;
            ensure(bad.is_none(), || {
                format!("embedding β={bl}+{br} breaks {bad:?}")
            })?;
            embeds += 1;
        }
    }
    let mut sums = 0;
    let mut r = rng(8);
    for (w, min_parity, kappa) in power_cases() {
        let w = obj(w);
        let lv = levels(min_parity, kappa);
        let colours = fam(0..2);
        let total = graph_count(&colours, 2).unwrap();
        for _ in 0..10 {
            let mut targets: Vec<PowerGraph> = Vec::new();
            let mut graphs: Vec<(OrderedGraph, Morphism)> = Vec::new();
            while graphs.len() < 3 {
                let g = graph_from_index(&colours, 2, r.gen_range(0..total));
                if !satisfies_exact(&g, &w).map_err(e2s)?.satisfied {
                    continue;
                }
                let beta = r.gen_range(2..=3);
                let target = power_graph(lv.clone(), beta).map_err(e2s)?;
                if let Some(phi) = morphism_search(&g, &target.graph) {
                    graphs.push((OrderedGraph::discrete(g), phi));
                    targets.push(target);
                }
            }
            let beta: usize = targets.iter().map(|t| t.beta).sum();
            let whole = power_graph(lv.clone(), beta).map_err(e2s)?;
            let parts: Vec<(OrderedGraph, Morphism, &PowerGraph)> = graphs
                .into_iter()
                .zip(&targets)
                .map(|((g, phi), t)| (g, phi, t))
                .collect();
            let (sum, map) = sum_morphism(&parts, &whole).map_err(e2s)?;
            let bad = morphism_check(&sum, &whole.graph, &map).map_err(e2s)?;
            ensure(bad.is_none(), || format!("sum morphism breaks {bad:?}"))?;
            sums += 1;
        }
    }
    Ok(format!("{embeds} embeddings, {sums} random 3-part sums"))
}

// 9 ------------------------------------------------------------------------

fn criterion_9() -> Outcome {
    let parts = (1..=3u64)
        .map(|l| wrap_top(&signature_graph(l, 3)?, 2))
        .collect::<lexgames::Result<Vec<_>>>()
        .map_err(e2s)?;
    let sum = directed_sum(&parts).map_err(e2s)?;
    let r = check_almost_universality(
        &sum,
        &obj("MaxParity(3)"),
        &fam(0..3),
        2,
        &UniversalityOptions::default(),
    )
    .map_err(e2s)?;
    ensure(r.passed(), || format!("{} failures", r.failure_count))?;
    Ok(format!(
        "{} vertices, {} graphs",
        sum.len(),
        r.checked_count
    ))
}

// 10 -----------------------------------------------------------------------

fn criterion_10() -> Outcome {
    let mut notes = Vec::new();
    for w in ["MaxParity(3)", "MinParity(3)", "Parity(2)", "omegaBuchi(3)"] {
        let w = obj(w);
        let colours = w.family().unwrap();
        let cache = AutoCache::new();
        let mut winning = 0;
        for seed in 0..200 {
            let game =
                random_game(&mut rng(seed), &w, &colours, &GameParams::default()).map_err(e2s)?;
            let table = cache.table(&game, 200_000).map_err(e2s)?;
            let sol = table.solve(&game).map_err(e2s)?;
            let oracle = oracle_solve(&game, DEFAULT_STRATEGY_BUDGET).map_err(e2s)?;
            ensure(sol.winning == oracle, || {
                format!(
                    "{w} seed {seed}: solver {:?} oracle {oracle:?}",
                    sol.winning
                )
            })?;
            for v in (0..game.len()).filter(|&v| sol.winning[v]) {
                winning += 1;
                ensure(
                    verify_strategy(&game, &sol.strategy, v).map_err(e2s)?,
                    || format!("{w} seed {seed}: strategy loses from {}", game.label(v)),
                )?;
            }
        }
        notes.push(format!("{w}: {winning} winning vertices"));
    }
    Ok(notes.join("; "))
}

// 11-13 --------------------------------------------------------------------

fn two_letters() -> Vec<Colour> {
    vec![Colour::of(0), Colour::of(1)]
}

fn criterion_11() -> Outcome {
    let family = fam(0..2);
    let lassos = all_lassos(&two_letters(), 3, 4);
    let failures: Vec<String> = (0..500u64)
        .into_par_iter()
        .filter_map(|seed| {
            let mut r = rng(seed);
            let f = random_machine(&mut r, &family, 4);
            let g = random_machine(&mut r, &family, 4);
            let h = random_machine(&mut r, &family, 4);
            let check = || -> Result<(), String> {
                let mx = op_max(&f, &g).map_err(e2s)?;
                let un = op_union(&f, &g).map_err(e2s)?;
                ensure(pointwise_leq(&un, &f).map_err(e2s)?, || {
                    "union ≤ f fails".into()
                })?;
                ensure(
                    pointwise_leq(&f, &mx).map_err(e2s)? && pointwise_leq(&g, &mx).map_err(e2s)?,
                    || "max does not dominate".into(),
                )?;
                let small = mx.clone();
                let big = op_min(&f, &g).map_err(e2s)?;
                let step_f = successor_step(&small, &big, &f).map_err(e2s)?;
                let step_h = successor_step(&small, &big, &h).map_err(e2s)?;
                for s in [&step_f, &step_h] {
                    ensure(
                        pointwise_leq(&big, s).map_err(e2s)?
                            && pointwise_leq(s, &small).map_err(e2s)?,
                        || "successor step leaves its bounds".into(),
                    )?;
                }
                let mut h_sandwiched = true;
                let mut h_agrees = true;
                for w in &lassos {
                    let sem = |m| cobuchi_sem(m, w).unwrap();
                    let (sf, sg) = (sem(&f), sem(&g));
                    ensure(sem(&mx) == (sf && sg), || format!("max on {w}"))?;
                    ensure(sem(&un) == (sf || sg), || format!("union on {w}"))?;
                    ensure(sem(&step_f) == sf, || format!("successor step on {w}"))?;
                    let sh = sem(&h);
                    h_sandwiched &= (!sem(&small) || sh) && (!sh || sem(&big));
                    h_agrees &= sem(&step_h) == sh;
                }
                ensure(!h_sandwiched || h_agrees, || {
                    "successor step with a sandwiched f_next".into()
                })?;
                Ok(())
            };
            check().err().map(|e| format!("seed {seed}: {e}"))
        })
        .collect();
    ensure(failures.is_empty(), || {
        failures[..failures.len().min(3)].join("; ")
    })?;
    Ok(format!("500 machine triples × {} lassos", lassos.len()))
}

/// Index η_least: least η with `w ∈ ⟦f_η⟧`, or k.
fn least_accepting(chain: &[lexgames::Machine], w: &LassoWord) -> u64 {
    (0..chain.len())
        .find(|&i| cobuchi_sem(&chain[i], w).unwrap())
        .map_or(chain.len() as u64, |i| i as u64)
}

fn tail_member(w: &ObjectiveExpr, word: &LassoWord) -> bool {
    w.member(&word.tail()).map(|v| v.accepted).unwrap_or(false)
}

fn criterion_12() -> Outcome {
    let family = fam(0..2);
    let lassos = all_lassos(&two_letters(), 3, 4);
    for k in 1..=3usize {
        let target = ObjectiveExpr::MaxParity(Ordinal::nat(k as u64 + 1));
        for seed in 0..100u64 {
            let chain = random_chain(&mut rng(1000 * k as u64 + seed), &family, k, 3);
            let red = chain_reduction(&chain).map_err(e2s)?;
            for w in &lassos {
                let eta = least_accepting(&chain, w);
                let img = priority_image(&red, w).map_err(e2s)?;
                ensure(limsup_index(&img) == Ordinal::nat(eta), || {
                    format!(
                        "k={k} seed {seed} {w}: limsup {} vs least index {eta}",
                        limsup_index(&img)
                    )
                })?;
                // accepted iff the least accepting index is odd, for both parities of k
                let verdict = target.member(&img).map_err(e2s)?.accepted;
                ensure(verdict == (eta % 2 == 1), || {
                    format!("k={k} seed {seed} {w}: verdict")
                })?;
            }
        }
    }

    let mut r = rng(12);
    let mut checked = 0;
    // successor step: W_{<α'+1} = W_{<α'} ⋉ W_{α'}
    let successors = ["1", "2", "3", "4", "w+1", "w+2"];
    let alphabet: Vec<Colour> = ["0", "1", "2", "3", "4", "w", "w+1", "w+2"]
        .iter()
        .map(|s| Colour::new(ord(s), 0))
        .collect();
    for i in 0..1000 {
        let a = ord(successors[i % successors.len()]);
        let letters: Vec<Colour> = alphabet.iter().filter(|c| c.index <= a).cloned().collect();
        let w = random_lasso(&mut r, &letters, 3, 4);
        let direct = ObjectiveExpr::MaxParity(a.succ())
            .member(&w)
            .map_err(e2s)?
            .accepted;
        let below: BTreeSet<Ordinal> = w
            .letters()
            .map(|c| c.index.clone())
            .filter(|x| *x < a)
            .collect();
        let top = if a.is_even() {
            ObjectiveExpr::TL(a.clone())
        } else {
            ObjectiveExpr::TW(a.clone())
        };
        let mut entries = Vec::new();
        if !below.is_empty() {
            entries.push(
                ObjectiveExpr::MaxParity(a.clone())
                    .expand_over(below)
                    .map_err(e2s)?
                    .keyed(),
            );
        }
        entries.push((a.clone(), top));
        let binary = ObjectiveExpr::max_lex(entries).map_err(e2s)?;
        let split = binary.member(&w).map_err(e2s)?.accepted;
        ensure(direct == split, || {
            format!("successor identity at α'={a} on {w}")
        })?;
        checked += 1;
    }
    // limit step: W_{<α'} = ∪_{λ<α'} W_{<λ}, on the tail
    let limits: [(&str, Vec<&str>, Vec<&str>); 2] = [
        (
            "w",
            vec!["0", "1", "2", "3", "4", "5"],
            vec!["1", "2", "3", "4", "5", "6", "7"],
        ),
        (
            "w*2",
            vec!["0", "1", "w", "w+1", "w+2"],
            vec!["1", "2", "3", "w", "w+1", "w+2", "w+3"],
        ),
    ];
    for i in 0..1000 {
        let (a, alpha, lambdas) = &limits[i % 2];
        let letters: Vec<Colour> = alpha.iter().map(|s| Colour::new(ord(s), 0)).collect();
        let w = random_lasso(&mut r, &letters, 3, 4);
        let whole = ObjectiveExpr::MaxParity(ord(a))
            .member(&w)
            .map_err(e2s)?
            .accepted;
        let union = lambdas
            .iter()
            .any(|l| tail_member(&ObjectiveExpr::MaxParity(ord(l)), &w));
        ensure(whole == union, || {
            format!("limit identity at α'={a} on {w}")
        })?;
        checked += 1;
    }
    Ok(format!(
        "300 chains × {} lassos, {checked} identity lassos",
        lassos.len()
    ))
}

fn criterion_13() -> Outcome {
    let ints: Vec<Colour> = (0..3).map(Colour::of).collect();
    let omega_buchi = obj("omegaBuchi(w)");
    let min_parity = obj("MinParity(w)");
    let mut doubled = 0;
    for w in all_lassos(&ints, 4, 4) {
        let lhs = omega_buchi.member(&w).map_err(e2s)?.accepted;
        let rhs = min_parity
            .member(&double_map(&w).map_err(e2s)?)
            .map_err(e2s)?
            .accepted;
        ensure(lhs == rhs, || format!("doubling on {w}"))?;
        doubled += 1;
    }
    let w_ord = ord("w");
    let letters = vec![Colour::of(0), Colour::of(1), Colour::new(w_ord.clone(), 0)];
    let gammas: Vec<Ordinal> = (0..8).map(|i| Ordinal::nat(2 * i)).collect();
    let (above, below) = (obj("MaxParity(w+1)"), obj("MaxParity(w)"));
    let (mut collapsed, mut skipped) = (0, 0);
    for w in all_lassos(&letters, 4, 4) {
        if w.cycle().iter().any(|c| c.index == w_ord) {
            ensure(limit_collapse(&w, &w_ord, &gammas).is_err(), || {
                format!("accepted {w}")
            })?;
            skipped += 1;
            continue;
        }
        let image = limit_collapse(&w, &w_ord, &gammas).map_err(e2s)?;
        let lhs = above.member(&w).map_err(e2s)?.accepted;
        let rhs = below.member(&image).map_err(e2s)?.accepted;
        ensure(lhs == rhs, || format!("collapse on {w} -> {image}"))?;
        collapsed += 1;
    }
    Ok(format!(
        "{doubled} doubled, {collapsed} collapsed, {skipped} rejected (ω in cycle)"
    ))
}

// 14 -----------------------------------------------------------------------

fn criterion_14() -> Outcome {
    let mut total = 0u128;
    for (w, classes) in [
        ("MaxParity(2)", [0u64, 1]),
        ("MinParity(2)", [0, 1]),
        ("Parity(2)", [1, 2]),
    ] {
        let w = obj(w);
        let colours = fam(classes);
        for n in 1..=3 {
            let count = graph_count(&colours, n).unwrap();
            let bad = (0..count).into_par_iter().find_any(|&i| {
                let g = graph_from_index(&colours, n, i);
                let exact = satisfies_exact(&g, &w).unwrap();
                let bounded = satisfies_bounded(&g, &w, n).unwrap();
                let witness_ok = exact.witness.as_ref().is_none_or(|wit| {
                    !w.member(&wit.lasso).unwrap().accepted && wit.cycle.len() <= g.len()
                });
                exact.satisfied != bounded.satisfied || !witness_ok
            });
            ensure(bad.is_none(), || {
                format!("{w} n={n}: graph {} disagrees", bad.unwrap())
            })?;
            total += count;
        }
    }
    Ok(format!("{total} graphs, exhaustive"))
}

// --------------------------------------------------------------------------

fn main() {
    let criteria: [Criterion; 14] = [
        ("ordinal laws", 1, criterion_1),
        ("trivial-objective universality", 1, criterion_2),
        ("Parity(2) product graph universality", 120, criterion_3),
        (
            "signature graphs (almost) universal for max-parity",
            600,
            criterion_4,
        ),
        (
            "even-successor identity of signature graphs",
            1,
            criterion_5,
        ),
        ("power graph invariants", 60, criterion_6),
        ("power graph universality", 300, criterion_7),
        ("power graph embedding and sum morphisms", 60, criterion_8),
        ("directed sum almost universality", 120, criterion_9),
        ("solver agrees with oracle", 300, criterion_10),
        ("max/union/successor-step operators", 120, criterion_11),
        ("chain reduction and max-lex identities", 120, criterion_12),
        ("doubling and limit collapse", 60, criterion_13),
        (
            "cycle criteria agree with bounded search",
            300,
            criterion_14,
        ),
    ];
    let only: Option<usize> = std::env::var("ACCEPTANCE_ONLY")
        .ok()
        .and_then(|s| s.parse().ok());
    let mut failed = 0;
    for (i, (name, limit, run)) in criteria.iter().enumerate() {
        let id = i + 1;
        if only.is_some_and(|o| o != id) {
            continue;
        }
        let start = Instant::now();
        let outcome = run();
        let took = start.elapsed();
        let limit = Duration::from_secs(*limit);
        let (ok, detail) = match outcome {
            Ok(d) if took <= limit => (true, d),
            Ok(d) => (false, format!("{d}; over time")),
            Err(e) => (false, e),
        };
        failed += usize::from(!ok);
        println!(
            "{} {id:>2} {name} [{:.2}s / {}s]: {detail}",
            if ok { "PASS" } else { "FAIL" },
            took.as_secs_f64(),
            limit.as_secs()
        );
        std::io::stdout().flush().unwrap();
    }
    println!("acceptance: {} failed", failed);
    if failed > 0 && std::env::var("ACCEPTANCE_STRICT").is_ok_and(|v| v == "1") {
        std::process::exit(1);
    }
}
