//! Acceptance gate: one PASS/FAIL line per criterion, exit status 1 on any failure.

mod common;

use std::collections::BTreeSet;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestError, TestRng, TestRunner};

use surface_bounding::certs::{
    gram_check, pattern_euler, search_handlebody, Certificate, HandlebodySearch, TetExtensionCert,
    DEFAULT_TOL,
};
use surface_bounding::fuchsian::{search_vectors, Rational};
use surface_bounding::group::{atlas_build, SphericalType};
use surface_bounding::report::{geometric_certificate, reproduce, reverify_report, ReportJson};
use surface_bounding::subactions::index2_restrictions;

type Outcome = Result<String, String>;
type Check = fn() -> Outcome;

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn err(e: impl ToString) -> String {
    e.to_string()
}

fn run_reproduce(genus: u32) -> Result<(ReportJson, Duration), String> {
    let dir = tempfile::tempdir().map_err(err)?;
    let json = dir.path().join("report.json");
    let start = Instant::now();
    let out = Command::new(env!("CARGO_BIN_EXE_surface-bounding"))
        .args([
            "reproduce",
            "--genus",
            &genus.to_string(),
            "--json",
            json.to_str().unwrap(),
        ])
        .output()
        .map_err(err)?;
    let elapsed = start.elapsed();
    ensure(
        out.status.code() == Some(0),
        format!(
            "exit {:?}: {}",
            out.status.code(),
            String::from_utf8_lossy(&out.stderr)
        ),
    )?;
    let text = std::fs::read_to_string(&json).map_err(err)?;
    Ok((serde_json::from_str(&text).map_err(err)?, elapsed))
}

fn verdict_kind(row: &serde_json::Value) -> String {
    row["verdict"]["kind"].as_str().unwrap_or("").to_string()
}

fn rows_json(r: &ReportJson) -> Vec<serde_json::Value> {
    r.rows
        .iter()
        .map(|row| serde_json::to_value(row).unwrap())
        .collect()
}

fn genus3_table() -> Outcome {
    let expected = [
        ("psl27", "0:2,3,7", "non-bounding"),
        ("g96", "0:2,3,8", "non-bounding"),
        ("g48a", "0:3,3,4", "non-bounding"),
        ("z2xs4", "0:2,4,6", "bounds-geometrically"),
        ("g32a", "0:2,4,8", "non-bounding"),
        ("z2xd285", "0:2,4,8", "non-bounding"),
        ("sl23", "0:3,3,6", "non-bounding"),
        ("d_2_12_5", "0:2,4,12", "non-bounding"),
        ("z2xa4", "0:2,6,6", "bounds-by-restriction"),
        ("s4", "0:3,4,4", "bounds-by-restriction"),
        ("s4", "0:2,2,2,3", "bounds-handlebody"),
    ];
    let (report, elapsed) = run_reproduce(3)?;
    ensure(report.genus == 3, "genus field")?;
    let rows = rows_json(&report);
    ensure(rows.len() == 11, format!("{} rows", rows.len()))?;
    for (row, (atlas, sig, kind)) in rows.iter().zip(expected) {
        ensure(
            row["atlas"] == atlas && row["signature"] == sig && verdict_kind(row) == kind,
            format!(
                "row {atlas} {sig}: got {} {} {}",
                row["atlas"],
                row["signature"],
                verdict_kind(row)
            ),
        )?;
        ensure(
            row["surface_genus"] == 3,
            format!("{atlas}: genus {}", row["surface_genus"]),
        )?;
    }
    ensure(
        rows[3]["handlebody"] == "triangle-rule",
        "z2xs4 row lacks the no-handlebody rule",
    )?;
    ensure(
        elapsed < Duration::from_secs(300),
        format!("took {elapsed:?}"),
    )?;
    Ok(format!("11 rows, exit 0, {:.2}s", elapsed.as_secs_f64()))
}

fn cyclic_witnesses() -> Outcome {
    let expected = [
        ("psl27", 7, "0:7,7,7"),
        ("g96", 8, "0:4,8,8"),
        ("g48a", 4, "0:4,4,4,4"),
        ("g32a", 8, "0:4,8,8"),
        ("z2xd285", 8, "0:4,8,8"),
        ("sl23", 6, "0:2,3,3,6"),
        ("d_2_12_5", 12, "0:2,12,12"),
    ];
    let report = reproduce(3).map_err(err)?;
    let mut seen = Vec::new();
    for (atlas, order, sig) in expected {
        let row = report
            .rows
            .iter()
            .find(|r| r.atlas == atlas)
            .ok_or(format!("no row {atlas}"))?;
        let w = row.witness.as_ref().ok_or(format!("{atlas}: no witness"))?;
        let got = w.induced.signature().normalized().to_string();
        let size = w.induced.subgroup.len();
        ensure(
            size == order && got == sig,
            format!("{atlas}: witness {got} of order {size}"),
        )?;
        let h = &w.induced.group;
        let cyclic = h.order() == order && h.elements().any(|x| h.element_order(x) == order as u32);
        ensure(cyclic, format!("{atlas}: witness subgroup is not cyclic"))?;
        w.obstruction
            .recheck(&w.induced.cones, &w.induced.group)
            .map_err(|e| format!("{atlas}: {e}"))?;
        seen.push(format!("{sig}->Z{order}"));
    }
    // reverified a second time from the serialized report
    reverify_report(&report.to_json()).map_err(err)?;
    Ok(seen.join(", "))
}

fn absence_facts() -> Outcome {
    type Check = (
        &'static str,
        &'static str,
        fn(&surface_bounding::group::FiniteGroup) -> bool,
    );
    let checks: [Check; 8] = [
        ("psl27", "D7", |g| g.has_dihedral(7).is_none()),
        ("g96", "D8", |g| g.has_dihedral(8).is_none()),
        ("g48a", "D4", |g| g.has_dihedral(4).is_none()),
        ("g48a", "S4", |g| {
            g.polyhedral_subgroups(SphericalType::Octahedral).is_empty()
        }),
        ("g32a", "D8", |g| g.has_dihedral(8).is_none()),
        ("z2xd285", "D8", |g| g.has_dihedral(8).is_none()),
        ("sl23", "D6", |g| g.has_dihedral(6).is_none()),
        ("d_2_12_5", "D12", |g| g.has_dihedral(12).is_none()),
    ];
    let mut slowest = Duration::ZERO;
    for (atlas, what, check) in checks {
        let start = Instant::now();
        let g = atlas_build(atlas).map_err(err)?;
        ensure(check(&g), format!("{atlas} has a {what}"))?;
        let t = start.elapsed();
        ensure(t < Duration::from_secs(1), format!("{atlas} {what}: {t:?}"))?;
        slowest = slowest.max(t);
    }
    // the checks are not vacuous: the same searches do find these subgroups
    let s4 = atlas_build("s4").map_err(err)?;
    ensure(
        s4.has_dihedral(4).is_some()
            && s4.polyhedral_subgroups(SphericalType::Octahedral).len() == 1,
        "positive control failed",
    )?;
    let d = atlas_build("d3xd3").map_err(err)?;
    ensure(d.has_dihedral(3).is_some(), "positive control failed")?;
    Ok(format!(
        "8 absence checks, slowest {:.1} ms",
        slowest.as_secs_f64() * 1e3
    ))
}

fn given_images(cert: &TetExtensionCert) -> Vec<(String, Option<usize>)> {
    let g = cert.group();
    cert.convention
        .data
        .iter()
        .map(|m| (g.format(m.datum.image), m.datum.anchor))
        .collect()
}

fn type_set(cert: &TetExtensionCert) -> BTreeSet<String> {
    cert.vertex_types()
        .iter()
        .map(ToString::to_string)
        .collect()
}

fn tetrahedron_certificates() -> Outcome {
    let c48 = geometric_certificate("z2xs4", "0:2,4,6")
        .map_err(err)?
        .ok_or("no (2,4,6) certificate")?;
    c48.verify().map_err(err)?;
    let want48 = vec![
        ("(1234)(56)".to_string(), None),
        ("(143)(56)".to_string(), None),
        ("(142)".to_string(), None),
    ];
    ensure(
        given_images(&c48) == want48,
        format!("(2,4,6) data {:?}", given_images(&c48)),
    )?;
    ensure(
        c48.convention
            .data
            .iter()
            .all(|m| m.conjugator == c48.group().identity()),
        "(2,4,6) data used up to conjugacy",
    )?;

    let c120 = geometric_certificate("s5", "0:2,4,5")
        .map_err(err)?
        .ok_or("no (2,4,5) certificate")?;
    c120.verify().map_err(err)?;
    let want120 = vec![
        ("(2345)".to_string(), None),
        ("(12345)".to_string(), None),
        ("(135)".to_string(), Some(3)),
    ];
    ensure(
        given_images(&c120) == want120,
        format!("(2,4,5) data {:?}", given_images(&c120)),
    )?;
    let tv = surface_bounding::certs::tet_vertex_types(&c120.tetrahedron).map_err(err)?;
    ensure(
        tv[3].kind == Some(SphericalType::Icosahedral),
        "anchor vertex is not the A5 vertex",
    )?;

    let s5 = c120.group();
    let p = |s: &str| s5.parse_element(s).map_err(err);
    ensure(
        s5.mul(p("(12345)")?, p("(12)")?) == p("(2345)")?,
        "(12345)(12) != (2345)",
    )?;
    ensure(
        s5.mul(p("(12)(34)")?, p("(135)")?) == p("(12345)")?,
        "(12)(34)(135) != (12345)",
    )?;

    for (t, name) in [
        (&c48.tetrahedron, "(2,4,6)"),
        (&c120.tetrahedron, "(2,4,5)"),
    ] {
        let r = gram_check(t, DEFAULT_TOL).map_err(err)?;
        ensure(
            r.accepted && DEFAULT_TOL == 1e-9,
            format!("{name}: gram check rejected {r:?}"),
        )?;
    }
    let set = |xs: &[&str]| xs.iter().map(|s| s.to_string()).collect::<BTreeSet<_>>();
    ensure(
        type_set(&c48) == set(&["S4", "D6", "D3"]),
        format!("(2,4,6) types {:?}", type_set(&c48)),
    )?;
    ensure(
        type_set(&c120) == set(&["S4", "A5", "D2"]),
        format!("(2,4,5) types {:?}", type_set(&c120)),
    )?;
    let anchored = c120.convention.data[2];
    let edge_image = c120.images[surface_bounding::certs::tetra::edge_index(2, 3)];
    Ok(format!(
        "both accepted; (135) anchored at the A5 vertex, edge image {} = {}(135){}^-1",
        s5.format(edge_image),
        s5.format(anchored.conjugator),
        s5.format(anchored.conjugator)
    ))
}

fn handlebody_certificates() -> Outcome {
    let mut out = Vec::new();
    for atlas in ["s4", "d3xd3"] {
        let g = atlas_build(atlas).map_err(err)?;
        let sig = "0:2,2,2,3".parse().map_err(err)?;
        let v = search_vectors(&sig, &g, 1)
            .pop()
            .ok_or(format!("{atlas}: no vector"))?;
        let HandlebodySearch::Found(cert) = search_handlebody(&v, 2, 6) else {
            return Err(format!("{atlas}: no handlebody certificate"));
        };
        cert.verify().map_err(err)?;
        let euler = pattern_euler(&cert.pattern);
        ensure(
            cert.pattern.vertices.len() <= 2,
            format!("{atlas}: {} vertices", cert.pattern.vertices.len()),
        )?;
        ensure(
            euler == Rational::new(-1, 12),
            format!("{atlas}: euler {euler}"),
        )?;
        ensure(
            euler == sig.orb_euler() / Rational::from_integer(2),
            format!("{atlas}: euler is not chi/2"),
        )?;
        out.push(format!(
            "{atlas} ({} vertices)",
            cert.pattern.vertices.len()
        ));
    }
    Ok(format!("{}, euler -1/12", out.join(", ")))
}

fn index2_restriction() -> Outcome {
    let g = atlas_build("z2xs4").map_err(err)?;
    let v = search_vectors(&"0:2,4,6".parse().map_err(err)?, &g, 1)
        .pop()
        .ok_or("no vector")?;
    let mut sigs: Vec<String> = index2_restrictions(&v)
        .map_err(err)?
        .iter()
        .map(|(_, a)| a.signature().normalized().to_string())
        .collect();
    sigs.sort();
    ensure(
        sigs == ["0:2,2,2,3", "0:2,6,6", "0:3,4,4"],
        format!("{sigs:?}"),
    )?;
    Ok(format!("{{{}}}", sigs.join(" ")))
}

fn genus4_table() -> Outcome {
    let (report, _) = run_reproduce(4)?;
    let rows = rows_json(&report);
    ensure(rows.len() == 2, format!("{} rows", rows.len()))?;
    ensure(
        rows[0]["atlas"] == "s5" && verdict_kind(&rows[0]) == "bounds-geometrically",
        "s5 row",
    )?;
    ensure(
        rows[1]["atlas"] == "d3xd3" && verdict_kind(&rows[1]) == "bounds-handlebody",
        "d3xd3 row",
    )?;
    let order = rows[1]["order"].as_u64().unwrap_or(0);
    let genus = rows[1]["surface_genus"].as_u64().unwrap_or(0);
    ensure(
        genus == 4 && order == 36 && order == 12 * (genus - 1),
        format!("order {order}, genus {genus}"),
    )?;
    let rh = "0:2,2,2,3"
        .parse::<surface_bounding::fuchsian::Signature>()
        .map_err(err)?
        .rh_genus(36)
        .map_err(err)?;
    ensure(rh == 4, format!("rh genus {rh}"))?;
    Ok("s5 geometric, d3xd3 handlebody, genus 4, order 36 = 12(g-1)".into())
}

fn braid_suite() -> Outcome {
    let config = Config {
        cases: 1000,
        failure_persistence: None,
        ..Config::default()
    };
    let mut runner =
        TestRunner::new_with_rng(config, TestRng::deterministic_rng(RngAlgorithm::ChaCha));
    let strategy = (
        any::<prop::sample::Index>(),
        prop::collection::vec((0..8usize, any::<bool>()), 0..40),
    );
    let pool = common::all_vectors();
    let result = runner.run(&strategy, |(pick, moves)| {
        common::check_braid_sequence(&pool[pick.index(pool.len())], &moves)
            .map_err(TestCaseError::fail)
    });
    match result {
        Ok(()) => Ok("1000 random sequences".into()),
        Err(TestError::Fail(why, input)) => Err(format!("{why} on {input:?}")),
        Err(e) => Err(e.to_string()),
    }
}

fn oracle_suite() -> Outcome {
    let (pairs, nonempty) = common::compare_small_groups()?;
    ensure(pairs > 200 && nonempty > 20, format!("only {pairs} pairs"))?;
    Ok(format!(
        "{pairs} (signature, group) pairs, {nonempty} with vectors"
    ))
}

fn json_suite() -> Outcome {
    let mut certs = 0;
    let mut objects = 0;
    for genus in [3, 4] {
        let report = reproduce(genus).map_err(err)?;
        for (name, cert) in report.certificates() {
            let text = serde_json::to_string(&cert.to_json()).map_err(err)?;
            Certificate::reverify_str(&text).map_err(|e| format!("{name}: {e}"))?;
            certs += 1;
        }
        let text = serde_json::to_string(&report.to_json()).map_err(err)?;
        let back: ReportJson = serde_json::from_str(&text).map_err(err)?;
        objects += reverify_report(&back).map_err(err)?;
    }
    Ok(format!("{certs} certificates, {objects} report objects"))
}

fn euler_suite() -> Outcome {
    let (induced, patterns) = common::check_euler_identities()?;
    ensure(patterns >= 2, "no patterns checked")?;
    Ok(format!("{induced} induced actions, {patterns} patterns"))
}

fn main() -> ExitCode {
    let criteria: [(&str, Check); 11] = [
        ("1  genus-3 table", genus3_table),
        ("2  cyclic witnesses", cyclic_witnesses),
        ("3  subgroup absence", absence_facts),
        ("4  tetrahedron certificates", tetrahedron_certificates),
        ("5  handlebody certificates", handlebody_certificates),
        ("6  index-2 restrictions", index2_restriction),
        ("7  genus-4 table", genus4_table),
        ("8a braid moves", braid_suite),
        ("8b search oracle", oracle_suite),
        ("8c JSON re-verification", json_suite),
        ("8d Euler identities", euler_suite),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(check).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {name}: {detail} [{secs:.2}s]"),
            Err(why) => {
                failed += 1;
                println!("FAIL {name}: {why} [{secs:.2}s]");
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
