use crate::args::*;
use crate::report::{CliError, Report, Staged, Stopwatch};
use crate::source::{self, Inputs, Kind, Source};
use num_bigint::BigInt;
use obstructa::builtins::LinkingForm;
use obstructa::deleted_product::{DeletedProduct, ProductCell};
use obstructa::equivariant::{EquivariantComplex, SignCharacter};
use obstructa::o3::{self, LinkingData, MasseyInput, PARTITIONS};
use obstructa::plgeom::{self, format_q, q, Q};
use obstructa::simplicial::{validate_complex, ComplexJson, Simplex, SimplicialComplex};
use obstructa::staircase::{self, CochainRef, Staircase, TableCochain};
use obstructa::trees::{Tree, TreeGroup};
use obstructa::vk;
use obstructa::whitney::{self, W3Cochain};
use obstructa::zlinalg::{self, Certificate, CertificateKind, Payload, SolveOutcome};
use obstructa::Error;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use std::rc::Rc;

/// What a command produces.
pub enum Output {
    Report(Report),
    /// Raw JSON asset (e.g. `complex builtin`).
    Raw(String),
}

pub fn run(cli: &Cli) -> Result<Output, CliError> {
    let guard = cli.size_guard;
    let mut inputs = Inputs::default();
    let mut sw = Stopwatch::start();
    let mut report = match &cli.command {
        Command::Complex(ComplexCmd::Builtin { name }) => {
            let s = Source::load("complex", &format!("builtin:{name}"), Kind::Complex)?;
            return Ok(Output::Raw(s.text));
        }
        Command::Complex(cmd) => complex(cmd, &mut inputs)?,
        Command::Dp(DpCmd::Stats { complex, arity }) => dp_stats(&inputs.complex(complex)?, *arity, guard, &mut sw)?,
        Command::Linalg(cmd) => linalg(cmd, &mut inputs)?,
        Command::Geom(cmd) => geom(cmd, &mut inputs)?,
        Command::Vk(a) => vk_cmd(a, &mut inputs, guard, &mut sw)?,
        Command::O3(cmd) => o3_cmd(cmd, &mut inputs, guard, &mut sw)?,
        Command::W3(a) => w3_cmd(a, &mut inputs, &mut sw)?,
        Command::Wn(a) => wn_cmd(a, &mut inputs, guard, &mut sw)?,
        Command::Trees(cmd) => trees_cmd(cmd, guard)?,
        Command::Massey(a) => massey_cmd(a, &mut inputs, guard, &mut sw)?,
        Command::Verify(a) => verify_cmd(a, &mut inputs)?,
    };
    sw.lap(&mut report, "finish");
    report.inputs = inputs.digests;
    Ok(Output::Report(report))
}

fn big_strings(v: &[BigInt]) -> Vec<String> {
    v.iter().map(|x| x.to_string()).collect()
}

fn cell_json(c: &ProductCell) -> Value {
    json!(c.factors().iter().map(|s| s.vertices().to_vec()).collect::<Vec<_>>())
}

fn kind_name(k: CertificateKind) -> String {
    serde_json::to_value(k).expect("kind serializes").as_str().unwrap_or_default().to_string()
}

fn complex(cmd: &ComplexCmd, inputs: &mut Inputs) -> Result<Report, CliError> {
    match cmd {
        ComplexCmd::Validate { complex } => {
            let text = inputs.raw("complex", complex, Kind::Complex)?;
            let j: ComplexJson = serde_json::from_str(&text)
                .map_err(|e| Error::validation(format!("complex JSON: {e}")))
                .stage("parse")?;
            let list = j.simplices.clone().unwrap_or_else(|| j.maximal_simplices.clone());
            let rep = validate_complex(&list);
            if j.simplices.is_some() && !rep.valid {
                return Err(CliError::new(
                    "validate",
                    Error::validation(format!("invalid complex: {}", serde_json::to_string(&rep).expect("report serializes"))),
                ));
            }
            let c = SimplicialComplex::from_json(&j).stage("validate")?;
            let mut r = Report::new("complex validate");
            r.census = json!({ "counts": c.counts() });
            r.result = json!({ "name": c.name(), "checks": rep, "tags": c.tags().keys().collect::<Vec<_>>() });
            r.verdict = format!("valid complex {} with counts {:?}", c.name(), c.counts());
            Ok(r)
        }
        ComplexCmd::Show { complex } => {
            let c = inputs.complex(complex)?;
            let mut r = Report::new("complex show");
            r.census = json!({ "counts": c.counts() });
            let tags: serde_json::Map<String, Value> =
                c.tags().iter().map(|(k, v)| (k.clone(), json!(v.iter().map(|s| s.vertices().to_vec()).collect::<Vec<_>>()))).collect();
            r.result = json!({ "name": c.name(), "dim": c.dim(), "vertices": c.vertices().len(), "tags": tags });
            r.verdict = format!("{}: dimension {:?}, counts {:?}", c.name(), c.dim(), c.counts());
            Ok(r)
        }
        ComplexCmd::Builtin { .. } => unreachable!("handled by run"),
    }
}

fn dp_stats(c: &SimplicialComplex, n: usize, guard: usize, sw: &mut Stopwatch) -> Result<Report, CliError> {
    let mut r = Report::new("dp stats");
    let dp = DeletedProduct::build(c, n, guard).stage("deleted product")?;
    sw.lap(&mut r, "build");
    let mut dd = true;
    let top = dp.dim().unwrap_or(0);
    for k in 2..=top {
        let m = dp.boundary_matrix(k - 1).stage("boundary")?.matmul(&dp.boundary_matrix(k).stage("boundary")?).stage("boundary")?;
        dd &= m.is_zero();
    }
    let free = dp.action_is_free();
    let ec = EquivariantComplex::new(&dp, SignCharacter::Sign).stage("equivariant")?;
    let orbits: Vec<usize> = (0..=top).map(|k| ec.orbit_count(k)).collect();
    let mut ddbar = true;
    for k in 0..top.saturating_sub(1) {
        ddbar &= ec.coboundary(k + 1).matmul(&ec.coboundary(k)).stage("equivariant")?.is_zero();
    }
    sw.lap(&mut r, "checks");
    if !dd || !ddbar || !free {
        return Err(CliError::new("checks", Error::verification("structural check failed on the deleted product")));
    }
    r.census = json!({ "cells": dp.census(), "orbits": orbits, "top_cells": dp.cells(top).len() });
    r.result = json!({
        "complex": c.name(), "arity": n, "dim": dp.dim(),
        "checks": { "boundary_squares_to_zero": dd, "equivariant_coboundary_squares_to_zero": ddbar, "action_free": free }
    });
    r.verdict = format!("conf_s({}, {n}) has {} top cells in dimension {top}", c.name(), dp.cells(top).len());
    Ok(r)
}

fn linalg(cmd: &LinalgCmd, inputs: &mut Inputs) -> Result<Report, CliError> {
    match cmd {
        LinalgCmd::Snf { matrix } => {
            let m = inputs.matrix(matrix)?;
            let s = zlinalg::snf(&m);
            if !s.verify() {
                return Err(CliError::new("snf", Error::verification("U·A·V = D does not recheck")));
            }
            let mut r = Report::new("linalg snf");
            r.census = json!({ "rows": m.rows(), "cols": m.cols(), "nonzeros": m.nnz() });
            r.result = json!({ "rank": s.rank, "divisors": big_strings(&s.divisors), "u": s.u, "v": s.v });
            r.verdict = format!("rank {}, elementary divisors {:?}", s.rank, big_strings(&s.divisors));
            Ok(r)
        }
        LinalgCmd::Solve { matrix, rhs } => {
            let m = inputs.matrix(matrix)?;
            inputs.inline("rhs", rhs);
            let b: Vec<BigInt> = source::parse_integers(rhs).stage("parse")?.into_iter().map(BigInt::from).collect();
            let subject = "integer solvability of A·x = b".to_string();
            let cert = match zlinalg::solve_integer(&m, &b).stage("solve")? {
                SolveOutcome::Solution(x) => Certificate {
                    kind: CertificateKind::ZeroWithPrimitive,
                    subject,
                    payload: Payload::Primitive { coboundary: m.clone(), cocycle: b, primitive: x },
                },
                SolveOutcome::Infeasible(record) => Certificate {
                    kind: CertificateKind::NonzeroByInfeasibility,
                    subject,
                    payload: Payload::Infeasibility { coboundary: m.clone(), cocycle: b, record },
                },
            };
            cert.verify().stage("verify")?;
            let mut r = Report::new("linalg solve");
            r.census = json!({ "rows": m.rows(), "cols": m.cols(), "nonzeros": m.nnz() });
            let solvable = cert.kind == CertificateKind::ZeroWithPrimitive;
            r.result = json!({ "solvable": solvable });
            r.verdict = if solvable { "integer solution found".into() } else { "no integer solution".into() };
            r.certificates.push(cert);
            Ok(r)
        }
    }
}

fn parse_simplex(s: &str) -> Result<Simplex, CliError> {
    let v: Vec<u32> = source::parse_integers(s)
        .stage("parse")?
        .into_iter()
        .map(|x| u32::try_from(x).map_err(|_| Error::validation(format!("bad vertex {x}"))))
        .collect::<obstructa::Result<_>>()
        .stage("parse")?;
    Simplex::new(v).stage("parse")
}

fn geom(cmd: &GeomCmd, inputs: &mut Inputs) -> Result<Report, CliError> {
    match cmd {
        GeomCmd::Intersect { map, sigma, tau } => {
            let f = inputs.map(map)?;
            inputs.inline("sigma", sigma);
            inputs.inline("tau", tau);
            let (s, t) = (parse_simplex(sigma)?, parse_simplex(tau)?);
            let ir = plgeom::simplex_pair_intersection(&f, &s, &t).stage("intersect")?;
            let mut r = Report::new("geom intersect");
            r.verdict = format!("signed intersection {}", ir.total);
            r.result = serde_json::to_value(&ir).expect("report serializes");
            Ok(r)
        }
        GeomCmd::Link { map, complex, cycle2, cycle1, direction } => {
            let complex = match complex {
                Some(c) => c.as_str(),
                None if map.starts_with("builtin:synthetic_") => "builtin:disjoint_sphere_sphere_torus",
                None => return Err(CliError::new("args", Error::validation("--complex is required for a map file"))),
            };
            let c = inputs.complex(complex)?;
            let f = inputs.map(map)?;
            let dir = inputs.direction(direction)?;
            f.covers(&c).stage("link")?;
            let a = c.tag_cycle(cycle2).stage("link")?;
            let g = c.tag_cycle(cycle1).stage("link")?;
            let lk = plgeom::gauss_linking_2_1(&f, &a, &g, &dir).stage("link")?;
            let mut r = Report::new("geom link");
            r.result = json!({ "cycle2": cycle2, "cycle1": cycle1, "direction": dir.iter().map(format_q).collect::<Vec<_>>(), "linking_number": lk.to_string() });
            r.verdict = format!("lk({cycle2}, {cycle1}) = {lk}");
            Ok(r)
        }
    }
}

fn parse_params(s: &str) -> Result<Vec<Q>, CliError> {
    source::parse_vector(s).stage("parse")
}

fn vk_cmd(a: &VkArgs, inputs: &mut Inputs, guard: usize, sw: &mut Stopwatch) -> Result<Report, CliError> {
    let c = inputs.complex(&a.complex)?;
    let m = c.dim().ok_or_else(|| CliError::new("vk", Error::validation("empty complex")))?;
    let d = a.dim.unwrap_or(2 * m);
    let params = match &a.params {
        Some(p) => {
            inputs.inline("params", p);
            Some(parse_params(p)?)
        }
        None => None,
    };
    let mut r = Report::new("vk");
    let f = plgeom::moment_curve_map(&c, d, params.as_deref()).stage("map")?;
    let vc = vk::vk_cocycle(&c, &f, guard).stage("cocycle")?;
    sw.lap(&mut r, "cocycle");
    let cert = vk::vk_class(&vc).stage("class")?;
    sw.lap(&mut r, "class");
    let support: Vec<Value> = vc.support().iter().map(|(cell, v)| json!({ "cell": cell_json(cell), "value": v.to_string() })).collect();
    r.census = json!({
        "deleted_product": vc.dp.census(),
        "top_orbits": vc.ec.orbit_count(vc.degree),
        "generator_orbits": vc.ec.orbit_count(vc.degree - 1),
    });
    let nonzero = cert.kind.is_nonzero();
    let mut result = json!({ "complex": c.name(), "ambient_dim": d, "cocycle_support": support, "class": kind_name(cert.kind) });
    r.verdict = if nonzero {
        format!("van Kampen class of {} is nonzero: no PL embedding into R^{d}", c.name())
    } else {
        format!("van Kampen class of {} vanishes (primitive verified)", c.name())
    };
    r.certificates.push(cert);
    if a.stability {
        let p2: Vec<Q> = match &a.params2 {
            Some(p) => {
                inputs.inline("params2", p);
                parse_params(p)?
            }
            None => (0..c.vertices().len() as i64).map(|i| q(i * i + 1)).collect(),
        };
        let (same, scert) = vk::vk_class_stability(&c, params.as_deref(), Some(&p2), guard).stage("stability")?;
        sw.lap(&mut r, "stability");
        if !same {
            return Err(CliError::new("stability", Error::verification("cocycles of two generic maps are not cohomologous")));
        }
        result["stability"] = json!({ "same_class": same });
        r.certificates.push(scert);
    }
    r.result = result;
    Ok(r)
}

fn pick_tags<const N: usize>(c: &SimplicialComplex, given: &Option<String>, defaults: &[[&str; N]]) -> Result<[String; N], CliError> {
    if let Some(t) = given {
        return source::parse_tags::<N>(t).stage("parse");
    }
    for d in defaults {
        if d.iter().all(|t| c.tags().contains_key(*t)) {
            return Ok(d.map(|s| s.to_string()));
        }
    }
    Err(CliError::new("parse", Error::validation(format!("complex {} lacks the default cycle tags; pass --cycles", c.name()))))
}

fn complex_arg<'a>(pos: &'a Option<String>, flag: &'a Option<String>) -> Result<&'a str, CliError> {
    match (pos, flag) {
        (Some(p), None) | (None, Some(p)) => Ok(p),
        (Some(_), Some(_)) => Err(CliError::new("args", Error::validation("give the complex once"))),
        (None, None) => Err(CliError::new("args", Error::validation("a complex is required"))),
    }
}

fn linking_json(ld: &LinkingData) -> Value {
    json!({ "x": big_strings(&ld.x), "y": big_strings(&ld.y), "value": ld.value().to_string() })
}

fn o3_cmd(cmd: &O3Cmd, inputs: &mut Inputs, guard: usize, sw: &mut Stopwatch) -> Result<Report, CliError> {
    match cmd {
        O3Cmd::Kunneth { complex_pos, complex, linking, cycles } => {
            let c = inputs.complex(complex_arg(complex_pos, complex)?)?;
            let lf = inputs.linking(linking)?;
            let tags = pick_tags::<4>(&c, cycles, &[["S", "Sp", "D123", "D123p"], ["A", "B", "g1", "g2"]])?;
            let t: [&str; 4] = [&tags[0], &tags[1], &tags[2], &tags[3]];
            let mut r = Report::new("o3 kunneth");
            let out = o3::o3_kunneth(&c, &lf, t).stage("kunneth")?;
            sw.lap(&mut r, "kunneth");
            let ld = LinkingData::from_form(&lf, t).stage("kunneth")?;
            let odd = out.value.bit(0) || (-&out.value).bit(0);
            r.result = json!({ "cycles": tags, "linking": linking_json(&ld), "value": out.value.to_string(), "odd": odd });
            r.verdict = if out.value == BigInt::from(0) {
                "pairing vanishes: no obstruction detected on this product".to_string()
            } else {
                format!("third obstruction pairs to {} on {}x{}x(loops): nonzero", out.value, t[0], t[1])
            };
            r.certificates.extend(out.certificate);
            Ok(r)
        }
        O3Cmd::Cochain { complex_pos, complex, map, direction, linking, cycles } => {
            let c = inputs.complex(complex_arg(complex_pos, complex)?)?;
            let tags = pick_tags::<5>(&c, cycles, &[["S", "Sp", "T", "D123", "D123p"], ["A", "B", "T", "g1", "g2"]])?;
            let t: [&str; 5] = [&tags[0], &tags[1], &tags[2], &tags[3], &tags[4]];
            let lk_tags = [t[0], t[1], t[3], t[4]];
            let mut r = Report::new("o3 cochain");
            let (u, ld, route): (CochainRef, LinkingData, &str) = match (map, linking) {
                (Some(m), None) => {
                    let p = inputs.placement(m)?;
                    let dir = inputs.direction(direction)?;
                    let ld = LinkingData::from_placement(&c, &p, lk_tags, &dir).stage("linking")?;
                    sw.lap(&mut r, "linking");
                    let u = o3::gauss_cocycle(&c, &p, &dir, guard).stage("gauss cocycle")?;
                    sw.lap(&mut r, "gauss cocycle");
                    r.census["gauss_support"] = json!(u.support_len());
                    (Rc::new(u), ld, "gauss")
                }
                (None, Some(l)) => {
                    let lf: LinkingForm = inputs.linking(l)?;
                    let ld = LinkingData::from_form(&lf, lk_tags).stage("linking")?;
                    let u = o3::cross_product_cocycle(&c, &ld, t).stage("cross product cocycle")?;
                    (u, ld, "cross_product")
                }
                _ => return Err(CliError::new("args", Error::validation("pass exactly one of --map and --linking"))),
            };
            let z = o3::product_six_cycle(&c, t[0], t[1], t[2], [t[3], t[4]]).stage("product cycle")?;
            r.census["product_cycle_simplices"] = json!(z.len());
            let out = o3::o3_cochain(&c, u, t, guard).stage("cochain pairing")?;
            sw.lap(&mut r, "cochain pairing");
            let kunneth = ld.value();
            let agree = out.value == kunneth;
            r.result = json!({
                "cycles": tags, "route": route, "value": out.value.to_string(),
                "kunneth": linking_json(&ld), "agree": agree,
                "class": out.certificate.as_ref().map(|c| kind_name(c.kind)),
            });
            if !agree {
                return Err(CliError::new(
                    "cross-check",
                    Error::verification(format!("cochain pairing {} differs from the linking determinant {kunneth}", out.value)),
                ));
            }
            r.verdict = format!("Arnold pullback pairs to {} on {}x{}x{}, matching the linking determinant", out.value, t[0], t[1], t[2]);
            r.certificates.extend(out.certificate);
            Ok(r)
        }
    }
}

fn w3_orbits(w: &W3Cochain) -> Vec<Value> {
    w.orbit_support()
        .iter()
        .filter(|(_, v)| *v != &BigInt::from(0))
        .map(|(cell, v)| json!({ "orbit": cell_json(cell), "value": v.to_string() }))
        .collect()
}

fn w3_cmd(a: &W3Args, inputs: &mut Inputs, sw: &mut Stopwatch) -> Result<Report, CliError> {
    let c = inputs.complex(&a.complex)?;
    let mut wd = inputs.whitney(&a.datum)?;
    wd.validate(&c).stage("datum")?;
    if a.split {
        wd = whitney::split_fully(&wd).stage("split")?;
    }
    let mut r = Report::new("w3");
    let w = whitney::w3_cocycle(&c, &wd).stage("w3")?;
    sw.lap(&mut r, "w3");
    let orbits = w3_orbits(&w);
    r.census = json!({ "two_cells": c.simplices(2).len(), "pairs": wd.pairs.len(), "support_cells": w.values.len(), "support_orbits": orbits.len() });
    let mut result = json!({ "complex": c.name(), "orbit_support": orbits });
    let mut pairing: Option<BigInt> = None;
    let tags: [String; 3] = source::parse_tags::<3>(&a.cycle).stage("parse")?;
    let z = if a.certify {
        let z = whitney::product_cycle(&c, [&tags[0], &tags[1], &tags[2]]).stage("product cycle")?;
        let subject = format!("w3 of {} on {}x{}x{}", c.name(), tags[0], tags[1], tags[2]);
        match whitney::w3_pairing_certificate(&w, &z, &subject).stage("certify")? {
            Some(cert) => {
                pairing = cert.pairing_value().cloned();
                r.certificates.push(cert);
            }
            None => pairing = Some(BigInt::from(0)),
        }
        sw.lap(&mut r, "certify");
        Some(z)
    } else {
        None
    };
    if a.stabilize > 0 {
        let moves = whitney::stabilization_moves(&c);
        if moves.is_empty() {
            return Err(CliError::new("stabilize", Error::validation("the complex admits no stabilization move")));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
        let mut stabilized = wd.clone();
        let mut expected = w.values.clone();
        let mut applied = Vec::new();
        for _ in 0..a.stabilize {
            let (s1, s2, nu) = &moves[rng.gen_range(0..moves.len())];
            let sign = if rng.gen_bool(0.5) { 1 } else { -1 };
            stabilized = whitney::stabilize(&c, &stabilized, *s1, *s2, nu, sign).stage("stabilize")?;
            expected = expected.add(&whitney::elementary_coboundary(&c, *s1, *s2, nu).stage("stabilize")?.scale(&BigInt::from(sign)));
            applied.push(json!({ "s1": s1, "s2": s2, "nu": nu.vertices(), "sign": sign }));
        }
        let w2 = whitney::w3_cocycle(&c, &stabilized).stage("stabilize")?;
        let exact = w2.values == expected;
        let mut same_cert = None;
        if let Some(z) = &z {
            let p2 = whitney::w3_pairing_certificate(&w2, z, "stabilized w3").stage("stabilize")?;
            let v2 = p2.as_ref().and_then(|c| c.pairing_value().cloned()).unwrap_or_default();
            same_cert = Some(Some(v2) == pairing || (pairing == Some(BigInt::from(0)) && p2.is_none()));
        }
        sw.lap(&mut r, "stabilize");
        result["stabilization"] = json!({
            "moves": applied, "change_is_sum_of_elementary_coboundaries": exact, "certificate_unchanged": same_cert,
        });
        if !exact || same_cert == Some(false) {
            return Err(CliError::new("stabilize", Error::verification("stabilization changed w3 by more than a coboundary")));
        }
    }
    if let Some(p) = &pairing {
        result["pairing"] = json!(p.to_string());
    }
    r.verdict = match &pairing {
        Some(p) if *p != BigInt::from(0) => format!("w3 pairs to {p} with the product cycle: class is nonzero"),
        Some(_) => "w3 pairs to 0 with the product cycle".to_string(),
        None => format!("w3 supported on {} orbit(s)", orbits.len()),
    };
    r.result = result;
    Ok(r)
}

fn wn_cmd(a: &WnArgs, inputs: &mut Inputs, guard: usize, sw: &mut Stopwatch) -> Result<Report, CliError> {
    let c = inputs.complex(&a.complex)?;
    let td = inputs.towers(&a.towers)?;
    if let Some(n) = a.arity {
        if n != td.arity {
            return Err(CliError::new("args", Error::validation(format!("towers have arity {}, -n says {n}", td.arity))));
        }
    }
    let mut r = Report::new("wn");
    let wn = whitney::wn_cochain(&c, &td, guard).stage("wn")?;
    sw.lap(&mut r, "wn");
    let two_ways = whitney::check_action_two_ways(&wn.group, &td).stage("action")?;
    if !two_ways {
        return Err(CliError::new("action", Error::verification("relabeling and the group action disagree")));
    }
    let taus: Vec<Value> = td
        .towers
        .iter()
        .map(|t| Ok(json!({ "cells": t.cells, "tau": big_strings(&whitney::tau_n(&wn.group, t)?.coords) })))
        .collect::<obstructa::Result<_>>()
        .stage("wn")?;
    r.census = json!({ "towers": td.towers.len(), "support_cells": wn.values.len(), "tree_group": wn.group.summary() });
    r.result = json!({ "arity": td.arity, "order": td.order(), "tau": taus, "action_checked_two_ways": two_ways });
    r.verdict = format!("w{} supported on {} cells with values in a free group of rank {}", td.arity, wn.values.len(), wn.group.basis.len());
    Ok(r)
}

fn trees_cmd(cmd: &TreesCmd, guard: usize) -> Result<Report, CliError> {
    match cmd {
        TreesCmd::Rank { order } => {
            let g = TreeGroup::new(*order, guard).stage("trees")?;
            let s = g.summary();
            let mut r = Report::new("trees rank");
            r.census = json!({ "generators": s.generators, "relations": s.relations });
            r.verdict = format!(
                "T_{order} has rank {}{}",
                s.rank,
                if s.torsion.is_empty() { ", torsion-free".to_string() } else { format!(", torsion {:?}", s.torsion) }
            );
            r.result = serde_json::to_value(&s).expect("summary serializes");
            Ok(r)
        }
        TreesCmd::Reduce { order, tree } => {
            let g = TreeGroup::new(*order, guard).stage("trees")?;
            let v: Value = serde_json::from_str(tree).map_err(|e| Error::validation(format!("tree JSON: {e}"))).stage("parse")?;
            let t = Tree::from_json(&v).stage("parse")?;
            let coords = g.reduce_tree(&t).stage("reduce")?;
            let mut r = Report::new("trees reduce");
            r.result = json!({ "basis": g.basis.iter().map(|b| format!("{b:?}")).collect::<Vec<_>>(), "coords": big_strings(&coords) });
            r.verdict = format!("coordinates {:?}", big_strings(&coords));
            Ok(r)
        }
    }
}

fn massey_cmd(a: &MasseyArgs, inputs: &mut Inputs, guard: usize, sw: &mut Stopwatch) -> Result<Report, CliError> {
    let c = inputs.complex(&a.complex)?;
    let mut r = Report::new("massey");
    let st2 = Staircase::new(&DeletedProduct::build(&c, 2, guard).stage("conf2")?, guard).stage("conf2")?;
    let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
    let mut w = TableCochain::new(2, 2);
    for s in st2.simplices(2) {
        w.set(s.clone(), BigInt::from(rng.gen_range(-2i64..=2)));
    }
    let w: CochainRef = Rc::new(w);
    let input = match a.route {
        MasseyRoute::Exact => MasseyInput::Exact(w),
        MasseyRoute::Solve => MasseyInput::Cocycle(staircase::coboundary(w)),
    };
    let y = o3::massey_y4(&c, input, guard).stage("massey")?;
    sw.lap(&mut r, "primitives");
    let dp4 = DeletedProduct::build(&c, 4, guard).stage("conf4")?;
    let st4 = Staircase::new(&dp4, guard).stage("conf4")?;
    let sum = staircase::memo(
        staircase::lincomb(y.y.iter().map(|(_, c)| (BigInt::from(1), c.clone())).collect()).stage("massey")?,
    );
    let mut sum_bad = 0usize;
    let mut nonzero_entries = 0usize;
    let mut y_memo: Vec<CochainRef> = y.y.iter().map(|(_, c)| staircase::memo(c.clone())).collect();
    for s in st4.simplices(8) {
        if sum.value(s) != BigInt::from(0) {
            sum_bad += 1;
        }
        if y_memo.iter().any(|c| c.value(s) != BigInt::from(0)) {
            nonzero_entries += 1;
        }
    }
    sw.lap(&mut r, "three-term sum");
    let mut dy_bad = 0usize;
    for yc in y_memo.iter_mut() {
        let d = staircase::coboundary(yc.clone());
        for s in st4.simplices(9) {
            if d.value(s) != BigInt::from(0) {
                dy_bad += 1;
            }
        }
    }
    sw.lap(&mut r, "coboundaries");
    let formal_ok = PARTITIONS.iter().all(|p| o3::formal_massey_coboundary(*p).is_empty());
    r.census = json!({
        "conf2_simplices": st2.census(), "conf4_cells": dp4.census(), "conf4_simplices": st4.census(),
    });
    r.result = json!({
        "route": format!("{:?}", a.route).to_lowercase(),
        "cochains": y.y.iter().map(|(n, _)| n.clone()).collect::<Vec<_>>(),
        "checked_8_simplices": st4.simplices(8).len(),
        "three_term_sum_nonzero_entries": sum_bad,
        "y_nonzero_simplices": nonzero_entries,
        "checked_9_simplices": st4.simplices(9).len(),
        "coboundary_nonzero_entries": dy_bad,
        "formal_coboundaries_vanish": formal_ok,
    });
    if sum_bad > 0 || dy_bad > 0 || !formal_ok {
        return Err(CliError::new("massey", Error::verification(format!("Massey identities fail: {} sum entries, {} coboundary entries", sum_bad, dy_bad))));
    }
    r.verdict = format!(
        "δY = 0 on all {} 9-simplices and the three-term sum vanishes on all {} 8-simplices",
        st4.simplices(9).len(),
        st4.simplices(8).len()
    );
    Ok(r)
}

/// Re-verifies every certificate in a JSON or JSON Lines report file.
pub fn verify_reports(text: &str) -> Result<(usize, usize), CliError> {
    let mut reports = 0;
    let mut certs = 0;
    for line in text.lines().filter(|l| !l.trim().is_empty()) {
        let rep: Report = serde_json::from_str(line)
            .map_err(|e| Error::validation(format!("corrupted report: {e}")))
            .stage("parse")?;
        reports += 1;
        for c in &rep.certificates {
            c.verify().stage("verify")?;
            certs += 1;
        }
    }
    if reports == 0 {
        return Err(CliError::new("parse", Error::validation("no report found")));
    }
    if certs == 0 {
        return Err(CliError::new("parse", Error::validation("report contains no certificate")));
    }
    Ok((reports, certs))
}

fn verify_cmd(a: &VerifyArgs, inputs: &mut Inputs) -> Result<Report, CliError> {
    let text = inputs.raw("report", &a.report, Kind::Report)?;
    let (reports, certs) = verify_reports(&text)?;
    let mut r = Report::new("verify");
    r.result = json!({ "reports": reports, "certificates": certs, "all_verified": true });
    r.verdict = format!("{certs} certificate(s) in {reports} report(s) re-verified");
    Ok(r)
}
