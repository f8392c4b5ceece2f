//! The claim suite behind `sumnet paper-suite`.
//!
//! Each claim computes an observed summary string and compares it with a
//! fixed expected string; a claim passes exactly when the two are equal.

use std::fmt::Write as _;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{anyhow, Context, Result};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use sumnet::network::DEFAULT_PATH_LIMIT;
use sumnet::par::Parallelism;
use sumnet::solver::{
    brute_force_scalar, characteristic_set_probe, g1_code, g1_condition_check,
    g1_exhaustive_triples, g1_structured_code, g1_triple, lift_scalar_to_vector,
    smstar_structured_code,
};
use sumnet::{
    gen_g1, gen_smstar, is_solution, lift_to_matrix, reverse_code, transfer_matrix,
    transfer_via_paths, Elem, FiniteField, LinearCode, SearchOptions, SolverError, SumNetwork,
    VerdictStatus,
};

#[derive(Debug, Clone, Serialize)]
pub struct ClaimRecord {
    pub id: String,
    pub location: String,
    pub parameters: String,
    pub expected: String,
    pub observed: String,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub runtime_ms: Option<u64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub claims: Vec<ClaimRecord>,
    pub passed: usize,
    pub total: usize,
}

impl SuiteReport {
    pub fn all_passed(&self) -> bool {
        self.passed == self.total
    }

    pub fn to_table(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "{:<26} {:<4} {:>9}  OBSERVED", "CLAIM", "PASS", "TIME");
        for c in &self.claims {
            let time = c
                .runtime_ms
                .map_or_else(|| "-".to_string(), |ms| format!("{ms} ms"));
            let _ = writeln!(
                s,
                "{:<26} {:<4} {:>9}  {}",
                c.id,
                if c.pass { "ok" } else { "FAIL" },
                time,
                c.observed
            );
            if !c.pass {
                let _ = writeln!(
                    s,
                    "{:<26} {:<4} {:>9}  expected: {}",
                    "", "", "", c.expected
                );
            }
        }
        let _ = writeln!(s, "{} of {} claims passed", self.passed, self.total);
        s
    }
}

/// Where the suite gets its networks: the generators, or JSON files
/// `g1.json` / `smstar_<m>.json` in a fixture directory when present.
pub struct Fixtures {
    dir: Option<PathBuf>,
}

impl Fixtures {
    pub fn new(dir: Option<&Path>) -> Self {
        Fixtures {
            dir: dir.map(Path::to_path_buf),
        }
    }

    fn load(&self, file: &str) -> Result<Option<SumNetwork>> {
        let Some(dir) = &self.dir else {
            return Ok(None);
        };
        let path = dir.join(file);
        if !path.exists() {
            return Ok(None);
        }
        let bytes = std::fs::read(&path).with_context(|| format!("reading {}", path.display()))?;
        let net =
            SumNetwork::load(&bytes).with_context(|| format!("loading {}", path.display()))?;
        Ok(Some(net))
    }

    fn g1(&self) -> Result<SumNetwork> {
        Ok(self.load("g1.json")?.unwrap_or_else(gen_g1))
    }

    fn smstar(&self, m: usize) -> Result<SumNetwork> {
        match self.load(&format!("smstar_{m}.json"))? {
            Some(net) => Ok(net),
            None => Ok(gen_smstar(m)?),
        }
    }
}

struct Claim {
    id: &'static str,
    location: &'static str,
    parameters: &'static str,
    expected: &'static str,
    run: fn(&Fixtures) -> Result<String>,
}

fn gf(p: u64, k: u32) -> FiniteField {
    FiniteField::new(p, k).expect("valid field")
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn g1_gf2_unsolvable(fx: &Fixtures) -> Result<String> {
    let g1 = fx.g1()?;
    let f2 = gf(2, 1);
    let v = brute_force_scalar(&g1, &f2, SearchOptions::reduced())?;
    let tried = v.stats.map_or(0, |s| s.assignments_tried);
    let t = g1_exhaustive_triples(&f2, Parallelism::Parallel)?;
    Ok(format!(
        "{} after {tried} assignments; {} of {} triples solve ({} completions)",
        v.status.as_str(),
        t.solving_triples.len(),
        t.triples,
        t.completions_tried
    ))
}

fn g1_solvable(fx: &Fixtures) -> Result<String> {
    let g1 = fx.g1()?;
    let mut parts = Vec::new();
    for f in [gf(3, 1), gf(2, 2), gf(5, 1)] {
        let mut ok = 0;
        for alpha in f.elements().skip(2) {
            let code = g1_structured_code(&f, alpha)?;
            ok += usize::from(is_solution(&g1, &code)?);
        }
        parts.push(format!("{f}: {ok} alpha"));
    }
    let f3 = gf(3, 1);
    let opts = SearchOptions {
        find_all: true,
        ..SearchOptions::reduced()
    };
    let v = brute_force_scalar(&g1, &f3, opts)?;
    let mut triples: Vec<String> = v
        .solutions
        .iter()
        .map(|c| match g1_triple(c) {
            Some((a, b, g)) => format!("({},{},{})", a.index(), b.index(), g.index()),
            None => "(?)".to_string(),
        })
        .collect();
    triples.dedup();
    Ok(format!(
        "{}; search over GF(3) finds {}",
        parts.join(", "),
        triples.join(" ")
    ))
}

fn smstar_m4(fx: &Fixtures) -> Result<String> {
    let net = fx.smstar(4)?;
    let mut solved = Vec::new();
    for f in [gf(3, 1), gf(5, 1), gf(7, 1)] {
        let code = smstar_structured_code(4, &f, 1)?;
        if is_solution(&net, &code)? {
            solved.push(f.to_string());
        }
    }
    let mut rejected = Vec::new();
    for f in [gf(2, 1), gf(2, 2)] {
        if let Err(SolverError::CharacteristicDividesM2 { .. }) = smstar_structured_code(4, &f, 1) {
            rejected.push(f.to_string());
        }
    }
    let v = brute_force_scalar(&net, &gf(2, 1), SearchOptions::reduced())?;
    Ok(format!(
        "solves over {}; rejected over {}; GF(2) search {} after {} assignments",
        solved.join(" "),
        rejected.join(" "),
        v.status.as_str(),
        v.stats.map_or(0, |s| s.assignments_tried)
    ))
}

fn smstar_m8(fx: &Fixtures) -> Result<String> {
    let net = fx.smstar(8)?;
    let fields = [gf(2, 1), gf(3, 1), gf(2, 2), gf(5, 1), gf(7, 1), gf(3, 2)];
    let rows = characteristic_set_probe(8, &fields, SearchOptions::default())?;
    let mut parts = Vec::new();
    for (f, row) in fields.iter().zip(&rows) {
        let verified = match &row.structured.witness {
            Some(w) => is_solution(&net, w)?,
            None => row.structured.status == VerdictStatus::UnsolvableStructural,
        };
        let label = match (row.solvable(), verified) {
            (Some(s), true) => yes_no(s).to_string(),
            _ => "unverified".to_string(),
        };
        parts.push(format!("{f}={label}"));
    }
    Ok(parts.join(" "))
}

fn g1_vector(fx: &Fixtures) -> Result<String> {
    let g1 = fx.g1()?;
    let mut parts = Vec::new();
    for n in [2u32, 3] {
        let ext = gf(2, n);
        let scalar = g1_structured_code(&ext, ext.elem(2).expect("q >= 4"))?;
        let lifted = lift_scalar_to_vector(&g1, &scalar)?;
        parts.push(format!(
            "{ext} -> N={} over {}: {}",
            lifted.block_len(),
            lifted.field(),
            if is_solution(&g1, &lifted)? {
                "solves"
            } else {
                "fails"
            }
        ));
    }
    Ok(parts.join("; "))
}

fn witnesses(fx: &Fixtures) -> Result<Vec<(SumNetwork, LinearCode)>> {
    let g1 = fx.g1()?;
    let mut out = Vec::new();
    for f in [gf(3, 1), gf(2, 2), gf(5, 1)] {
        for alpha in f.elements().skip(2) {
            out.push((g1.clone(), g1_structured_code(&f, alpha)?));
        }
    }
    let opts = SearchOptions {
        find_all: true,
        ..SearchOptions::reduced()
    };
    for code in brute_force_scalar(&g1, &gf(3, 1), opts)?.solutions {
        out.push((g1.clone(), code));
    }
    let s4 = fx.smstar(4)?;
    for f in [gf(3, 1), gf(5, 1), gf(7, 1)] {
        out.push((s4.clone(), smstar_structured_code(4, &f, 1)?));
    }
    let s8 = fx.smstar(8)?;
    for f in [gf(5, 1), gf(7, 1)] {
        out.push((s8.clone(), smstar_structured_code(8, &f, 1)?));
    }
    for n in [2, 3] {
        let ext = gf(2, n);
        let scalar = g1_structured_code(&ext, ext.elem(2).expect("q >= 4"))?;
        out.push((g1.clone(), lift_scalar_to_vector(&g1, &scalar)?));
    }
    Ok(out)
}

fn reverse_witnesses(fx: &Fixtures) -> Result<String> {
    let ws = witnesses(fx)?;
    let mut solving = 0;
    let mut transposed = 0;
    for (net, code) in &ws {
        let rev_net = net.reverse();
        let rev = reverse_code(net, code)?;
        solving += usize::from(is_solution(&rev_net, &rev)?);
        let t = transfer_matrix(net, code)?;
        transposed += usize::from(transfer_matrix(&rev_net, &rev)? == t.transpose());
    }
    Ok(format!(
        "{solving}/{n} reversed codes solve; {transposed}/{n} transfer matrices transposed",
        n = ws.len()
    ))
}

fn transfer_oracle(fx: &Fixtures) -> Result<String> {
    let nets = vec![fx.g1()?, fx.smstar(3)?, fx.smstar(4)?, fx.smstar(5)?];
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let (mut total, mut equal, mut consistent) = (0, 0, 0);
    for f in [gf(2, 1), gf(3, 1), gf(2, 2)] {
        for net in &nets {
            for _ in 0..100 {
                let code = LinearCode::random(net, &f, 1, &mut rng)?;
                let t = transfer_matrix(net, &code)?;
                total += 1;
                equal += usize::from(t == transfer_via_paths(net, &code, DEFAULT_PATH_LIMIT)?);
                consistent += usize::from(t.is_all_identity() == is_solution(net, &code)?);
            }
        }
    }
    Ok(format!(
        "{equal}/{total} path sums equal; {consistent}/{total} identity iff solving"
    ))
}

fn field_axioms(_: &Fixtures) -> Result<String> {
    let mut bad = Vec::new();
    for f in [
        gf(2, 1),
        gf(3, 1),
        gf(2, 2),
        gf(5, 1),
        gf(2, 3),
        gf(3, 2),
        gf(2, 4),
    ] {
        let mut ok = true;
        for a in f.elements() {
            ok &= a.is_zero() || f.mul(a, f.inv(a)?) == f.one();
            ok &= f.add(a, f.neg(a)).is_zero();
            for b in f.elements() {
                for c in f.elements() {
                    ok &= f.add(f.add(a, b), c) == f.add(a, f.add(b, c));
                    ok &= f.mul(f.mul(a, b), c) == f.mul(a, f.mul(b, c));
                    ok &= f.mul(a, f.add(b, c)) == f.add(f.mul(a, b), f.mul(a, c));
                }
            }
        }
        if !ok {
            bad.push(f.to_string());
        }
    }
    let mut lift_ok = 0;
    for n in [2u32, 3] {
        let (ext, base) = (gf(2, n), gf(2, 1));
        let mut ok = true;
        for a in ext.elements() {
            for b in ext.elements() {
                let (la, lb) = (
                    lift_to_matrix(&ext, a, &base)?,
                    lift_to_matrix(&ext, b, &base)?,
                );
                ok &= la.add(&lb)? == lift_to_matrix(&ext, ext.add(a, b), &base)?;
                ok &= la.mul(&lb)? == lift_to_matrix(&ext, ext.mul(a, b), &base)?;
            }
        }
        lift_ok += usize::from(ok);
    }
    let mut frob_ok = 0;
    let frob_fields = [
        (2u64, 1u32),
        (3, 1),
        (2, 2),
        (5, 1),
        (7, 1),
        (2, 3),
        (3, 2),
        (11, 1),
        (13, 1),
        (2, 4),
    ];
    for (p, k) in frob_fields {
        let f = gf(p, k);
        let ok = f.elements().all(|a| {
            f.elements()
                .all(|b| f.pow(f.add(a, b), p) == f.add(f.pow(a, p), f.pow(b, p)))
        });
        frob_ok += usize::from(ok);
    }
    Ok(format!(
        "axioms hold in {}/7 fields; {lift_ok}/2 lifts homomorphic; Frobenius additive in {frob_ok}/{}",
        7 - bad.len(),
        frob_fields.len()
    ))
}

fn g1_conditions(fx: &Fixtures) -> Result<String> {
    let g1 = fx.g1()?;
    let mut parts = Vec::new();
    for f in [gf(2, 1), gf(3, 1), gf(2, 2), gf(5, 1)] {
        let nz: Vec<Elem> = f.elements().skip(1).collect();
        let (mut total, mut agree) = (0, 0);
        for &a in &nz {
            for &b in &nz {
                for &c in &nz {
                    let cond = g1_condition_check(&f, a, b, c)?;
                    let solves = is_solution(&g1, &g1_code(&f, a, b, c)?)?;
                    total += 1;
                    agree += usize::from(cond == solves);
                }
            }
        }
        parts.push(format!("{f} {agree}/{total}"));
    }
    Ok(parts.join(", "))
}

const CLAIMS: &[Claim] = &[
    Claim {
        id: "g1-gf2-unsolvable",
        location: "G_1 lemma, binary field case",
        parameters: "G_1; GF(2); reduced search; all nonzero triples",
        expected:
            "UnsolvableExhaustive after 4096 assignments; 0 of 1 triples solve (64 completions)",
        run: g1_gf2_unsolvable,
    },
    Claim {
        id: "g1-solvable-odd-fields",
        location: "G_1 lemma, fields other than GF(2)",
        parameters: "G_1; GF(3), GF(4), GF(5); every alpha not in {0,1}",
        expected:
            "GF(3): 1 alpha, GF(2^2): 2 alpha, GF(5): 3 alpha; search over GF(3) finds (2,2,2)",
        run: g1_solvable,
    },
    Claim {
        id: "smstar-m4-characteristic",
        location: "S_m* characteristic condition, m = 4",
        parameters: "S_4*; GF(2), GF(3), GF(4), GF(5), GF(7)",
        expected: "solves over GF(3) GF(5) GF(7); rejected over GF(2) GF(2^2); \
                   GF(2) search UnsolvableExhaustive after 32768 assignments",
        run: smstar_m4,
    },
    Claim {
        id: "smstar-m8-probe",
        location: "characteristic set {2,3}, m = 8",
        parameters: "S_8*; GF(2), GF(3), GF(4), GF(5), GF(7), GF(9); structured only",
        expected: "GF(2)=no GF(3)=no GF(2^2)=no GF(5)=yes GF(7)=yes GF(3^2)=no",
        run: smstar_m8,
    },
    Claim {
        id: "g1-vector-gf2",
        location: "G_1 vector coding over GF(2), N > 1",
        parameters: "G_1; GF(4) -> N=2, GF(8) -> N=3",
        expected: "GF(2^2) -> N=2 over GF(2): solves; GF(2^3) -> N=3 over GF(2): solves",
        run: g1_vector,
    },
    Claim {
        id: "reverse-witnesses",
        location: "reversibility of solvable sum-networks",
        parameters: "every witness from the G_1, S_4*, S_8* and vector claims",
        expected: "21/21 reversed codes solve; 21/21 transfer matrices transposed",
        run: reverse_witnesses,
    },
    Claim {
        id: "transfer-path-oracle",
        location: "transfer entries as sums of path gains",
        parameters: "G_1, S_3*, S_4*, S_5*; GF(2), GF(3), GF(4); 100 random codes each",
        expected: "1200/1200 path sums equal; 1200/1200 identity iff solving",
        run: transfer_oracle,
    },
    Claim {
        id: "field-axioms",
        location: "finite field arithmetic and extension lifting",
        parameters: "q in {2,3,4,5,8,9,16}; GF(4), GF(8) over GF(2); Frobenius q <= 16",
        expected: "axioms hold in 7/7 fields; 2/2 lifts homomorphic; Frobenius additive in 10/10",
        run: field_axioms,
    },
    Claim {
        id: "g1-condition-equivalence",
        location: "G_1 solvability conditions",
        parameters: "G_1; GF(2), GF(3), GF(4), GF(5); all nonzero triples",
        expected: "GF(2) 1/1, GF(3) 8/8, GF(2^2) 27/27, GF(5) 64/64",
        run: g1_conditions,
    },
];

pub fn claim_ids() -> Vec<&'static str> {
    CLAIMS.iter().map(|c| c.id).collect()
}

/// Runs every claim whose id matches `filter` (a glob pattern). Failures
/// and panics are recorded, never propagated.
pub fn run(filter: Option<&str>, fixtures: &Fixtures, timing: bool) -> Result<SuiteReport> {
    let pattern = filter
        .map(glob::Pattern::new)
        .transpose()
        .map_err(|e| anyhow!("bad filter pattern: {e}"))?;
    let mut claims = Vec::new();
    for claim in CLAIMS {
        if pattern.as_ref().is_some_and(|p| !p.matches(claim.id)) {
            continue;
        }
        let start = Instant::now();
        let observed = match catch_unwind(AssertUnwindSafe(|| (claim.run)(fixtures))) {
            Ok(Ok(s)) => s,
            Ok(Err(e)) => format!("error: {e:#}"),
            Err(_) => "error: panicked".to_string(),
        };
        let elapsed = start.elapsed().as_millis() as u64;
        claims.push(ClaimRecord {
            id: claim.id.to_string(),
            location: claim.location.to_string(),
            parameters: claim.parameters.to_string(),
            expected: claim.expected.to_string(),
            pass: observed == claim.expected,
            observed,
            runtime_ms: timing.then_some(elapsed),
        });
    }
    let passed = claims.iter().filter(|c| c.pass).count();
    Ok(SuiteReport {
        total: claims.len(),
        passed,
        claims,
    })
}
