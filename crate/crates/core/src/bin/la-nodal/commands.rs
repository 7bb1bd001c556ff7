use crate::spec::{self, FieldChoice};
use crate::*;
use la_nodal::acceptance::{format_line, Suite, CRITERIA};
use la_nodal::blowup::{classify_point, tangent_field, BlowupOptions};
use la_nodal::corpus::build_corpus;
use la_nodal::extension::{cns_const, dtn, frac_laplacian_direct, gamma_const, poisson_extend, ExtensionOptions, FracParam};
use la_nodal::field::Field;
use la_nodal::monotonicity::{almgren_with, monneau, monotone_report, weiss, Functionals, Provenance};
use la_nodal::nodal::{crossing_count, extract_nodal, measure_boxcount, Disk, Rect, SampledGrid};
use la_nodal::poly::json::{ratio_string, to_json, to_json_symbolic};
use la_nodal::poly::{garofalo_extend, planar, planar_even, planar_odd, ratio_to_f64, Coeff, MultiPoly, RatFn, Q};
use la_nodal::quadrature::{ball_measure_const, sphere_measure_const, WeightParam};
use la_nodal::sharm1d::{construct_order, verify_order, SHarmonic1d, VerifyOptions};
use la_nodal::solver::{max_principle, solve_extension, GridDomain, GridParity, SolverOptions};
use la_nodal::{Error, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

pub fn run(cmd: &Command, seed: u64) -> Result<Outcome> {
    match cmd {
        Command::Poly(a) => poly(a),
        Command::Extend(a) => extend(a),
        Command::CheckFrac(a) => check_frac(a),
        Command::Solve(a) => solve(a, seed),
        Command::Frequency(a) => frequency(a),
        Command::Blowup(a) => blowup(a),
        Command::Nodal(a) => nodal(a),
        Command::Construct1d(a) => construct1d(a),
        Command::Acceptance(a) => acceptance(a),
        Command::Corpus(c) => corpus(c),
        Command::Report(a) => report(a),
    }
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("JSON values always serialize") + "\n"
}

fn json_outcome(name: &str, v: Value, passed: bool) -> Outcome {
    let body = pretty(&v);
    Outcome { stdout: body.clone(), files: vec![(format!("{name}.json"), body)], passed }
}

fn weight(a: &str) -> Result<(Q, f64)> {
    let q = spec::rational(a)?;
    let f = ratio_to_f64(&q);
    Ok((q, f))
}

fn build_poly<C: Coeff>(args: &PolyArgs, a: &C) -> Result<MultiPoly<C>> {
    let need_k = || args.k.ok_or_else(|| Error::InvalidArgument(format!("--k is required for the {} family", args.family)));
    match args.family.as_str() {
        "even" => planar_even(need_k()?, a),
        "odd" => planar_odd(need_k()?, a),
        "planar" => planar(need_k()?, a),
        "ext" => {
            let m = args.monomial.as_deref().ok_or_else(|| Error::InvalidArgument("--monomial is required for ext".into()))?;
            let mut e = m
                .split(',')
                .map(|t| t.trim().parse::<u32>().map_err(|_| Error::Parse(format!("bad exponent {t:?}"))))
                .collect::<Result<Vec<_>>>()?;
            e.push(0);
            garofalo_extend(&MultiPoly::monomial(e, C::one()), a)
        }
        other => Err(Error::InvalidArgument(format!("unknown family {other:?} (even, odd, planar, ext)"))),
    }
}

fn poly(args: &PolyArgs) -> Result<Outcome> {
    let (json, degree, residual_terms) = if args.a == "symbolic" {
        let a = RatFn::var();
        let p = build_poly(&args, &a)?;
        let r = if args.verify { Some(p.apply_la(&a)?.num_terms()) } else { None };
        (to_json_symbolic(&p), p.degree(), r)
    } else {
        let (a, _) = weight(&args.a)?;
        let p = build_poly(&args, &a)?;
        let r = if args.verify { Some(p.apply_la(&a)?.num_terms()) } else { None };
        (to_json(&p, &a), p.degree(), r)
    };
    let mut v = json!({ "polynomial": json, "degree": degree });
    if let Some(r) = residual_terms {
        v["residual"] = json!(if r == 0 { "0".to_string() } else { format!("{r} nonzero terms") });
    }
    Ok(json_outcome("poly", v, residual_terms.is_none_or(|r| r == 0)))
}

fn line_points(x: &str, n: usize) -> Result<Vec<Vec<f64>>> {
    let pts = if n == 1 && !x.contains(';') { spec::list(x)?.into_iter().map(|v| vec![v]).collect() } else { spec::points(x)? };
    if let Some(p) = pts.iter().find(|p| p.len() != n) {
        return Err(Error::InvalidArgument(format!("point {p:?} does not have {n} coordinates")));
    }
    Ok(pts)
}

fn extend(args: &ExtendArgs) -> Result<Outcome> {
    let (s, sf) = weight(&args.s)?;
    let datum = spec::datum(&args.datum, args.n, &s)?;
    let opts = ExtensionOptions::default();
    let xs = line_points(&args.x, args.n)?;
    let ys = spec::list(&args.y)?;
    let mut rows = Vec::new();
    let mut csv = String::from("x,y,value,error\n");
    for x in &xs {
        for &y in &ys {
            let e = poisson_extend(&datum, x, y, sf, &opts)?;
            let xt: Vec<String> = x.iter().map(|c| format!("{c:.16e}")).collect();
            csv += &format!("{},{y:.16e},{:.16e},{:.16e}\n", xt.join(" "), e.value, e.error);
            rows.push(json!({ "x": x, "y": y, "value": e.value, "error": e.error }));
        }
    }
    let mut v = json!({ "s": ratio_string(&s), "datum": args.datum, "values": rows });
    if args.dtn {
        let d = xs.iter().map(|x| dtn(&datum, x, sf, &opts).map(|r| json!({ "x": x, "dtn": r }))).collect::<Result<Vec<_>>>()?;
        v["dtn"] = Value::Array(d);
    }
    let mut out = json_outcome("extension", v, true);
    out.files.push(("extension.csv".into(), csv));
    Ok(out)
}

fn check_frac(args: &CheckFracArgs) -> Result<Outcome> {
    let (s, sf) = weight(&args.s)?;
    let datum = spec::datum(&args.datum, 1, &s)?;
    let opts = ExtensionOptions::default();
    let mut rows = Vec::new();
    let mut worst = 0.0f64;
    for x in spec::list(&args.x)? {
        let d = dtn(&datum, &[x], sf, &opts)?;
        let f = frac_laplacian_direct(&datum, x, sf, 1e-12)?;
        let gap = (d.value - f.value).abs() / f.value.abs().max(1.0);
        worst = worst.max(gap);
        rows.push(json!({ "x": x, "dtn": d.value, "direct": f.value, "relative_gap": gap }));
    }
    let passed = worst <= args.tol;
    Ok(json_outcome("check_frac", json!({ "s": ratio_string(&s), "points": rows, "max_gap": worst, "tol": args.tol, "passed": passed }), passed))
}

fn grid_parity(fc: &FieldChoice) -> Result<GridParity> {
    let Some(e) = &fc.exact else { return Ok(GridParity::Symmetric) };
    let odd = e.odd.as_ref().is_some_and(|v| !v.terms().is_empty());
    let even = !e.even.terms().is_empty();
    match (even, odd) {
        (true, true) => Err(Error::WrongParity("the solver needs data of one parity; split the field".into())),
        (false, true) => Ok(GridParity::Antisymmetric),
        _ => Ok(GridParity::Symmetric),
    }
}

fn solve(args: &SolveArgs, seed: u64) -> Result<Outcome> {
    let (a, af) = weight(&args.a)?;
    let fc = spec::field(&args.field, &a)?;
    let parity = grid_parity(&fc)?;
    let domain = GridDomain::new(fc.n, args.half_width, args.height, args.nx, args.ny.unwrap_or(args.nx))?;
    let w = WeightParam::new(fc.n, af)?;
    // seeded smooth perturbation: a few random plane waves
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let waves: Vec<(Vec<f64>, f64, f64)> = (0..4)
        .map(|_| {
            let k: Vec<f64> = (0..=fc.n).map(|_| rng.random_range(-3.0..3.0)).collect();
            (k, rng.random_range(0.0..std::f64::consts::TAU), rng.random_range(-1.0..1.0))
        })
        .collect();
    let eps = args.perturb;
    let u = fc.field.clone();
    let data = move |p: &[f64]| {
        let bump: f64 = waves.iter().map(|(k, ph, c)| c * (k.iter().zip(p).map(|(a, b)| a * b).sum::<f64>() + ph).cos()).sum();
        u.value(p) + eps * bump
    };
    let opts = SolverOptions { tol: args.tol, max_iter: args.max_iter, ..Default::default() };
    let (g, rep) = solve_extension(&data, parity, &w, &domain, &opts)?;
    let scale = g.values.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(f64::MIN_POSITIVE);
    let mp = max_principle(&g, 1e-10 * scale);
    let max_error = match (&fc.exact, eps == 0.0) {
        (Some(e), true) => Some((0..domain.len()).map(|i| (g.values[i] - e.value(&domain.coords(i))).abs()).fold(0.0, f64::max)),
        _ => None,
    };
    let summary = json!({
        "grid": g.header(),
        "iterations": rep.iterations,
        "residual": rep.residual,
        "max_principle": {
            "holds": mp.holds,
            "boundary": [mp.boundary_min, mp.boundary_max],
            "interior": [mp.interior_min, mp.interior_max],
        },
        "max_error": max_error,
        "perturbation": { "amplitude": eps, "seed": seed },
    });
    let mut out = json_outcome("grid", summary, mp.holds);
    out.files.push(("grid.csv".into(), g.to_csv()));
    Ok(out)
}

fn functionals_for(fc: &FieldChoice, a: f64) -> Result<Functionals> {
    Functionals::with_defaults(&WeightParam::new(fc.n, a)?)
}

fn center(c: Option<&str>, n: usize) -> Result<Vec<f64>> {
    let x0 = match c {
        Some(c) => spec::list(c)?,
        None => vec![0.0; n + 1],
    };
    if x0.len() != n + 1 {
        return Err(Error::InvalidArgument(format!("the centre needs {} coordinates", n + 1)));
    }
    Ok(x0)
}

fn blowup_options(fc: &FieldChoice) -> BlowupOptions {
    match fc.grid_h {
        Some(h) => BlowupOptions::grid(h, 0.5),
        None => BlowupOptions::exact(),
    }
}

fn frequency(args: &FrequencyArgs) -> Result<Outcome> {
    let (a, af) = weight(&args.a)?;
    let fc = spec::field(&args.field, &a)?;
    let x0 = center(args.center.as_deref(), fc.n)?;
    let radii = spec::radii(&args.radii)?;
    let fun = functionals_for(&fc, af)?;
    let prov = if fc.grid_h.is_some() { Provenance::Grid } else { Provenance::ExactPoly };
    let u: &dyn Field = &*fc.field;
    let profile = almgren_with(&fun, u, &x0, &radii, prov)?;
    let at_origin = x0.iter().all(|c| *c == 0.0);
    let k = args.k.or(fc.homogeneity.filter(|_| at_origin)).unwrap_or_else(|| profile.limit_frequency());
    let w = weiss(&profile, k);
    // Monneau needs a blow-up of the same homogeneity; use the fitted tangent map.
    let m = tangent_field(&fun, u, &x0, &blowup_options(&fc))
        .ok()
        .and_then(|t| t.leading().map(|l| (l.k, l.fit.field(af))))
        .filter(|(kt, _)| (kt - k).abs() < 1e-2)
        .map(|(_, p)| monneau(&fun, u, &x0, &p, k, &radii))
        .transpose()?;
    let freq = profile.frequencies();
    let n_report = monotone_report(&freq, args.tol);
    let w_report = monotone_report(&w.values, args.tol * w.values.iter().fold(1.0f64, |s, v| s.max(v.abs())));
    let m_report = m.as_ref().map(|m| monotone_report(&m.values, args.tol * m.values.iter().fold(1.0f64, |s, v| s.max(v.abs()))));
    let mut csv = String::from("r,H,E,N,W_k,M\n");
    for (i, s) in profile.samples.iter().enumerate() {
        let mv = m.as_ref().map_or(f64::NAN, |m| m.values[i]);
        csv += &format!("{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}\n", s.r, s.h, s.e, s.n, w.values[i], mv);
    }
    let verdict = json!({
        "center": x0,
        "k": k,
        "limit_frequency": profile.limit_frequency(),
        "frequency_monotone": n_report,
        "weiss_monotone": w_report,
        "monneau_monotone": m_report,
    });
    let line = serde_json::to_string(&verdict)?;
    Ok(Outcome {
        stdout: format!("{csv}# {line}\n"),
        files: vec![("frequency.csv".into(), csv), ("verdict.json".into(), pretty(&verdict))],
        passed: n_report.monotone,
    })
}

fn blowup(args: &BlowupArgs) -> Result<Outcome> {
    let (a, af) = weight(&args.a)?;
    let fc = spec::field(&args.field, &a)?;
    let fun = functionals_for(&fc, af)?;
    let points = match &args.points {
        Some(p) => spec::points(p)?,
        None => vec![vec![0.0; fc.n + 1]],
    };
    let mut opts = blowup_options(&fc);
    opts.snap_tol = args.snap_tol;
    let mut rows = Vec::new();
    for x0 in &points {
        if x0.len() != fc.n + 1 {
            return Err(Error::InvalidArgument(format!("point {x0:?} needs {} coordinates", fc.n + 1)));
        }
        let c = classify_point(&fun, &*fc.field, x0, &opts)?;
        rows.push(json!({
            "X0": c.center,
            "k_raw": c.k_raw,
            "k_snapped": c.k_snapped,
            "parity": c.parity,
            "order_parity": c.order_parity,
            "stratum": c.stratum.label(),
            "spine_dim": c.spine_dim,
            "labels": c.labels,
            "coefficients": c.coefficients,
            "residual": c.residual,
            "y_dependence": c.y_dependence,
        }));
    }
    Ok(json_outcome("blowup", Value::Array(rows), true))
}

fn nodal(args: &NodalArgs) -> Result<Outcome> {
    let (a, _) = weight(&args.a)?;
    let fc = spec::field(&args.field, &a)?;
    if fc.n != 1 {
        return Err(Error::InvalidArgument("nodal sets are computed in the plane (n = 1)".into()));
    }
    if !(args.radius > 0.0) || args.cells < 2 {
        return Err(Error::InvalidArgument("need a positive radius and at least 2 cells".into()));
    }
    let u = fc.field.clone();
    let grid = SampledGrid::from_field(&*u, Rect::square(args.radius), args.cells, args.cells)?;
    let set = extract_nodal(&grid, args.zero_tol);
    let window = Disk { center: [0.0, 0.0], radius: args.radius };
    let boxes = measure_boxcount(&set, &window);
    let lines = crossing_count(&|x, y| u.value(&[x, y]), &window, 256, 1024, args.zero_tol * grid.max_abs());
    let v = json!({
        "radius": args.radius,
        "segments": set.segments.len(),
        "polyline_length": set.length_in(&window),
        "boxcount": boxes,
        "crossing": lines,
    });
    let mut out = json_outcome("measure", v, true);
    out.files.push(("nodal.csv".into(), set.to_csv()));
    out.files.push(("nodal.gp".into(), set.to_gnuplot()));
    Ok(out)
}

fn construct1d(args: &Construct1dArgs) -> Result<Outcome> {
    let (_, s) = weight(&args.s)?;
    if args.samples < 2 || !(args.range > 0.0) {
        return Err(Error::InvalidArgument("need at least 2 samples and a positive range".into()));
    }
    let tail = construct_order(args.order, s)?;
    let g: Vec<String> = tail.g.0.iter().map(ratio_string).collect();
    let u = SHarmonic1d::from_tail(tail);
    let mut csv = String::from("x,u\n");
    for i in 0..args.samples {
        let x = -args.range + 2.0 * args.range * i as f64 / (args.samples - 1) as f64;
        csv += &format!("{x:.16e},{:.16e}\n", u.eval(x)?);
    }
    let report = verify_order(&u, args.order, &VerifyOptions::default())?;
    let gj = json!({ "s": s, "order": args.order, "g": g });
    let v = json!({ "g": gj, "report": report });
    Ok(Outcome {
        stdout: pretty(&v),
        files: vec![("g.json".into(), pretty(&gj)), ("u.csv".into(), csv), ("report.json".into(), pretty(&serde_json::to_value(&report)?))],
        passed: report.passed,
    })
}

fn acceptance(args: &AcceptanceArgs) -> Result<Outcome> {
    let ids: Vec<u32> = match &args.only {
        Some(s) => s
            .split(',')
            .map(|t| match t.trim().parse::<u32>() {
                Ok(i) if CRITERIA.iter().any(|c| c.0 == i) => Ok(i),
                _ => Err(Error::InvalidArgument(format!("no criterion {t:?}"))),
            })
            .collect::<Result<_>>()?,
        None => CRITERIA.iter().map(|c| c.0).collect(),
    };
    let suite = Suite::new()?;
    let results: Vec<_> = ids.iter().map(|&i| suite.run(i)).collect();
    let failed = results.iter().filter(|r| !r.passed).count();
    let mut text: String = results.iter().map(|r| format_line(r) + "\n").collect();
    text += &format!("acceptance: {} passed, {failed} failed\n", results.len() - failed);
    Ok(Outcome { stdout: text, files: vec![("acceptance.json".into(), pretty(&serde_json::to_value(&results)?))], passed: failed == 0 })
}

fn corpus(cmd: &CorpusCommand) -> Result<Outcome> {
    let (args, dump) = match cmd {
        CorpusCommand::List(a) => (a, false),
        CorpusCommand::Dump(a) => (a, true),
    };
    let (a, _) = weight(&args.a)?;
    let mut entries = build_corpus(&a, args.max_degree)?;
    if let Some(name) = &args.name {
        entries.retain(|e| &e.name == name);
        if entries.is_empty() {
            return Err(Error::InvalidArgument(format!("no corpus entry {name:?}")));
        }
    }
    if dump {
        return Ok(json_outcome("corpus", serde_json::to_value(&entries)?, true));
    }
    let mut text = String::new();
    for e in &entries {
        let kind = serde_json::to_value(e.kind)?;
        text += &format!("{}\t{}\tn={}\t{}\n", e.name, kind.as_str().unwrap_or(""), e.n, e.formula);
    }
    Ok(Outcome { stdout: text.clone(), files: vec![("corpus.txt".into(), text)], passed: true })
}

fn report(args: &ReportArgs) -> Result<Outcome> {
    let n = args.n;
    let (a, s) = match (&args.a, &args.s) {
        (Some(a), None) => {
            let (aq, af) = weight(a)?;
            let s = (Q::from_integer(1.into()) - aq) / Q::from_integer(2.into());
            let sf = ratio_to_f64(&s);
            (af, (sf > 0.0 && sf < 1.0).then_some(sf))
        }
        (None, Some(s)) => {
            let (_, sf) = weight(s)?;
            (1.0 - 2.0 * sf, Some(sf))
        }
        _ => return Err(Error::InvalidArgument("give exactly one of --a and --s".into())),
    };
    let mut v = json!({
        "n": n,
        "a": a,
        "sphere_measure_const": sphere_measure_const(n, a)?,
        "ball_measure_const": ball_measure_const(n, a, 1.0)?,
    });
    if let Some(s) = s {
        let p = FracParam::new(n, s)?;
        v["s"] = json!(s);
        v["gamma_const"] = serde_json::to_value(gamma_const(n, s)?)?;
        v["cns_const"] = json!(cns_const(n, s)?);
        v["dtn_factor"] = json!(p.dtn_factor());
    }
    Ok(json_outcome("report", v, true))
}
