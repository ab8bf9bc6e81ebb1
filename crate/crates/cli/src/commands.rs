use std::path::Path;

use anyhow::{bail, Context, Result};
use combasis::cbp::{common_basis_greedy, corank_table, ie_check, Collection, ViolationKind};
use combasis::complexes::{
    common_basis_complex, higher_tits, morse_check, random_morse_input, split_tits, tits, SimplicialComplex,
};
use combasis::exactlin::{Ring, Submodule};
use combasis::homology::{is_c_connected_homologically, morse_sides, reduced_homology};
use combasis::simpmodel::check_suspension;
use combasis::steinberg::tor_report;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::report::{Report, Verdict};
use crate::{Global, Kind, Mode, Params, RingArg, Suite};

fn config(global: &Global, extra: Value) -> Value {
    let mut c = serde_json::to_value(global).expect("config serializes");
    if let (Value::Object(c), Value::Object(e)) = (&mut c, extra) {
        c.extend(e);
    }
    c
}

fn no_sigma(params: &Params) -> Result<Collection> {
    Ok(Collection::new(params.field()?, params.n, Vec::new())?)
}

fn require_field(params: &Params, what: &str) -> Result<()> {
    if params.ring == RingArg::Z {
        bail!("{what} over Z is infinite; only membership queries are supported");
    }
    params.field()?;
    Ok(())
}

fn build_complex(kind: Kind, params: &Params, global: &Global) -> Result<SimplicialComplex> {
    require_field(params, "building")?;
    let caps = global.caps();
    let (n, p) = (params.n, params.p);
    Ok(match kind {
        Kind::Tits => tits(n, p, &caps)?,
        Kind::SplitTits => split_tits(n, p, &caps)?,
        Kind::Cb => common_basis_complex(n, p, &caps)?,
        Kind::Higher => higher_tits(params.a, params.b, n, p, &no_sigma(params)?, &caps)?,
    })
}

pub fn build(kind: Kind, params: &Params, global: &Global) -> Result<String> {
    Ok(build_complex(kind, params, global)?.to_text())
}

pub fn homology(file: Option<&Path>, kind: Option<Kind>, params: &Params, global: &Global) -> Result<Report> {
    let (k, source) = match (file, kind) {
        (Some(path), None) => {
            let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            (SimplicialComplex::from_text(&text)?, json!({ "file": path.display().to_string() }))
        }
        (None, Some(kind)) => (build_complex(kind, params, global)?, json!({ "kind": kind, "params": params })),
        _ => bail!("give either a complex file or --kind"),
    };
    let h = reduced_homology(&k);
    let results = json!({ "f_vector": k.f_vector(), "profile": h, "summary": h.summary() });
    Ok(Report::new("homology", config(global, source), results, Vec::new()))
}

fn violation_json(c: &Collection) -> Value {
    match ie_check(&c.ambient(), c.members(), true) {
        None => Value::Null,
        Some(v) => {
            let kind = match v.kind {
                ViolationKind::Rank { corank, alternating } => json!({ "rank": { "corank": corank, "alternating": alternating } }),
                ViolationKind::NotSplit => json!("not-split"),
            };
            json!({ "subset": v.subset, "kind": kind })
        }
    }
}

pub fn cbp(file: &Path, mode: Mode, global: &Global) -> Result<Report> {
    let text = std::fs::read_to_string(file).with_context(|| format!("reading {}", file.display()))?;
    let c = Collection::parse(&text)?;
    if c.len() > global.max_members {
        bail!("collection has {} members, cap is {}", c.len(), global.max_members);
    }
    let members: Vec<String> = c.members().iter().map(Submodule::label).collect();
    let mut results = json!({ "ring": c.ring().to_string(), "n": c.ambient_rank(), "members": members });
    let mut verdicts = Vec::new();
    let mut greedy_found = None;
    let mut ie_holds = None;
    if mode != Mode::Ie {
        let g = common_basis_greedy(&c)?;
        let sound = g.as_ref().is_none_or(|b| b.verify(&c));
        results["greedy"] = match &g {
            Some(b) => {
                let rows: Vec<Vec<String>> =
                    b.basis.row_vecs().iter().map(|r| r.iter().map(ToString::to_string).collect()).collect();
                json!({ "found": true, "basis": rows, "spans": b.spans })
            }
            None => json!({ "found": false }),
        };
        let detail = match (&g, sound) {
            (None, _) => "no basis returned",
            (Some(_), true) => "returned basis spans every member",
            (Some(_), false) => "returned basis failed re-canonicalization",
        };
        verdicts.push(Verdict::new("greedy-basis-verifies", "CorankCondition", sound, detail));
        greedy_found = Some(g.is_some());
    }
    if mode != Mode::Greedy {
        let v = violation_json(&c);
        let holds = v.is_null();
        let table = corank_table(&c)?;
        results["ie"] = json!({ "holds": holds, "violation": v, "corank": table.records() });
        let sums = table.sum_f() == table.sum_g();
        verdicts.push(Verdict::new("corank-sums", "SumF=SumG", sums, format!("sum F = {}, sum G = {}", table.sum_f(), table.sum_g())));
        ie_holds = Some(holds);
    }
    if let (Some(g), Some(i)) = (greedy_found, ie_holds) {
        verdicts.push(Verdict::new(
            "greedy-agrees-with-ie",
            "CBPCriterionPID-equivalence",
            g == i,
            format!("greedy {} / inclusion-exclusion {}", if g { "pass" } else { "fail" }, if i { "pass" } else { "fail" }),
        ));
    }
    Ok(Report::new("cbp", config(global, json!({ "file": file.display().to_string(), "mode": mode })), results, verdicts))
}

pub fn verify(suite: Suite, params: &Params, global: &Global) -> Result<Report> {
    let caps = global.caps();
    let (n, p) = (params.n, params.p);
    let results;
    let mut verdicts = Vec::new();
    match suite {
        Suite::Connectivity => {
            require_field(params, "connectivity")?;
            let c = 2 * n as i64 - 4;
            let cbk = common_basis_complex(n, p, &caps)?;
            let cb = reduced_homology(&cbk);
            let cb_ok = is_c_connected_homologically(&cbk, c);
            let t = tits(n, p, &caps)?;
            let th = reduced_homology(&t);
            let t_ok = is_c_connected_homologically(&t, n as i64 - 3) && th.is_free();
            let t2 = higher_tits(2, 0, n, p, &no_sigma(params)?, &caps)?;
            let t2h = reduced_homology(&t2);
            let t2_ok = is_c_connected_homologically(&t2, c);
            results = json!({ "cb": cb, "tits": th, "higher_2": t2h });
            verdicts.push(Verdict::new("cb-connectivity", "ConnectivityThm", cb_ok, format!("CB_{n}(F_{p}): {}", cb.summary())));
            verdicts.push(Verdict::new("higher-connectivity", "maingeneral", t2_ok, format!("T^2_{n}(F_{p}): {}", t2h.summary())));
            verdicts.push(Verdict::new("tits-connectivity", "SolomonTits", t_ok, format!("T_{n}(F_{p}): {}", th.summary())));
        }
        Suite::Koszul => {
            require_field(params, "Tor")?;
            let r = tor_report(n, p, &caps)?;
            verdicts.extend(tor_verdicts(&r));
            results = tor_results(&r);
        }
        Suite::Morse => {
            let count = params.k.unwrap_or(100);
            let mut rng = ChaCha8Rng::seed_from_u64(global.seed);
            let mut equal = 0;
            let mut first_bad = None;
            for i in 0..count {
                let (nv, f) = (rng.gen_range(4..=8), rng.gen_range(2..=6));
                let (x, s) = random_morse_input(&mut rng, nv, f, 4);
                let inst = morse_check(&x, &s)?;
                let (l, r) = morse_sides(&inst)?;
                if l == r {
                    equal += 1;
                } else if first_bad.is_none() {
                    first_bad = Some(format!("instance {i}: {} vs {}", l.summary(), r.summary()));
                }
            }
            results = json!({ "instances": count, "equal": equal });
            verdicts.push(Verdict::new(
                "relative-homology-decomposes",
                "Morse2",
                equal == count,
                first_bad.unwrap_or_else(|| format!("{equal} of {count} instances")),
            ));
        }
        Suite::Suspension => {
            require_field(params, "suspension")?;
            let r = check_suspension(params.a, params.b, n, p, &caps)?;
            results = json!({ "building": r.building, "model": r.model, "shift": r.shift });
            verdicts.push(Verdict::new(
                format!("suspension-a{}-b{}-n{n}", params.a, params.b),
                "suspend",
                r.pass,
                format!("building {} / model {}", r.building.summary(), r.model.summary()),
            ));
        }
        Suite::Join => match params.ring {
            RingArg::Z => {
                let u = Submodule::from_rows(Ring::Integers, 2, &[vec![1, 1]]);
                let v = Submodule::from_rows(Ring::Integers, 2, &[vec![1, -1]]);
                let pair = Collection::new(Ring::Integers, 2, vec![u.clone(), v.clone()])?;
                let in_join = [&u, &v].iter().all(|m| m.is_split() && !m.is_zero() && !m.is_ambient());
                let in_t2 = combasis::complexes::is_simplex_over_z(&pair)?;
                results = json!({ "witness": [u.label(), v.label()], "simplex_of_join": in_join, "simplex_of_t2": in_t2 });
                verdicts.push(Verdict::new(
                    "integral-join-differs",
                    "ExampleIncompatibleLines",
                    in_join && !in_t2,
                    format!("{} * {} is a simplex of T*T but not of T^2", u.label(), v.label()),
                ));
            }
            RingArg::Fp => {
                let t = tits(n, p, &caps)?;
                let t2 = higher_tits(2, 0, n, p, &no_sigma(params)?, &caps)?;
                let same = t2.same_simplices_by_label(&t.join(&t));
                results = json!({ "f_vector_t2": t2.f_vector() });
                verdicts.push(Verdict::new("field-join", "lemJoin", same, format!("T^2_{n}(F_{p}) against T*T")));
            }
        },
        Suite::SplitCompare => {
            require_field(params, "split comparison")?;
            if params.a == 0 {
                bail!("split comparison needs a >= 1");
            }
            let sigma = no_sigma(params)?;
            let split = reduced_homology(&higher_tits(params.a, params.b, n, p, &sigma, &caps)?);
            let plain = reduced_homology(&higher_tits(params.a + params.b, 0, n, p, &sigma, &caps)?);
            results = json!({ "split": split, "plain": plain });
            verdicts.push(Verdict::new(
                format!("split-compare-a{}-b{}", params.a, params.b),
                "SplitvsNotSplit",
                split == plain,
                format!("{} / {}", split.summary(), plain.summary()),
            ));
        }
    }
    let name = serde_json::to_value(suite).expect("suite serializes");
    Ok(Report::new(format!("verify {}", name.as_str().unwrap_or("?")), config(global, json!({ "params": params })), results, verdicts))
}

fn tor_results(r: &combasis::steinberg::TorReport) -> Value {
    json!({
        "n": r.n,
        "p": r.p,
        "profile": r.profile,
        "cross_checks": {
            "tord": if r.cross_checks.tord { "pass" } else { "fail" },
            "join_rank": if r.cross_checks.join_rank { "pass" } else { "fail" },
        },
        "euler": r.euler,
        "st_rank": r.st_rank,
    })
}

fn tor_verdicts(r: &combasis::steinberg::TorReport) -> Vec<Verdict> {
    let top = r.profile.betti(r.n as i64);
    vec![
        Verdict::new("koszul", "KD", r.koszul, format!("Tor = {}, rank St_{} = {}", r.profile.summary(), r.n, r.st_rank)),
        Verdict::new("tor-via-model", "TorD", r.cross_checks.tord, "bar complex against D^{2,0} shifted by -n"),
        Verdict::new("top-rank-via-join", "lemJoin", r.cross_checks.join_rank, format!("top rank {top}")),
        Verdict::new("euler", "PropositionTorViaBarConstruction", r.cross_checks.euler, format!("Euler characteristic {}", r.euler)),
        Verdict::new("bar-sizes", "Day", r.cross_checks.sizes, "basis sizes against the decomposition formula"),
    ]
}

pub fn tor(params: &Params, global: &Global) -> Result<Report> {
    require_field(params, "Tor")?;
    let r = tor_report(params.n, params.p, &global.caps())?;
    Ok(Report::new("tor", config(global, json!({ "params": params })), tor_results(&r), tor_verdicts(&r)))
}
