use std::fmt::Write;

use exscaf_core::oracle::OracleReport;
use exscaf_core::planner::Check;
use exscaf_core::ramification::{RamCheck, ShiftTables};
use exscaf_core::report::{ConvertReport, VerdictReport};
use exscaf_core::PlanReport;

pub trait Render {
    fn render(&self) -> String;
}

fn join<T: ToString>(v: &[T]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ")
}

fn mark(ok: bool) -> &'static str {
    if ok {
        "ok  "
    } else {
        "FAIL"
    }
}

fn checks_block(out: &mut String, checks: &[Check]) {
    for c in checks {
        let _ = writeln!(out, "  [{}] {}  (slack {})", mark(c.holds), c.id, c.slack);
    }
}

impl Render for PlanReport {
    fn render(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "variant {}  p = {}  n = {}  q = {}  e0 = {}", self.variant, self.p, self.n, self.q, self.e0);
        let _ = writeln!(s, "upper  u = ({})", join(&self.u));
        let _ = writeln!(s, "lower  b = ({})", join(&self.b));
        let a = &self.as_report;
        let _ = writeln!(
            s,
            "constants: ordered {:?}, lower bound {:?}, prime to p {:?}, independent leads {:?}, cross term {:?}",
            a.ordered, a.lower_bound, a.prime_to_p, a.independent_leads, a.cross_term
        );
        for note in &a.notes {
            let _ = writeln!(s, "  note: {note}");
        }
        let _ = writeln!(s, "checks:");
        checks_block(&mut s, &self.checks);
        let verdict = serde_json::to_value(self.verdict).expect("verdict serializes");
        let _ = writeln!(s, "verdict: {}", verdict.as_str().unwrap_or_default());
        match self.cfrak.value() {
            Some(c) => {
                let _ = writeln!(s, "scaffold precision: {c}");
            }
            None => {
                let _ = writeln!(s, "scaffold precision: not applicable");
            }
        }
        if let Some(g) = self.gms {
            let _ = writeln!(s, "module structure: {g}");
        }
        if let Some(alt) = &self.alternate_reading {
            let v = serde_json::to_value(alt.verdict).expect("verdict serializes");
            let c = alt.cfrak.value().map_or("not applicable".to_string(), |c| c.to_string());
            let _ = writeln!(
                s,
                "alternate reading without [{}]: {}, precision {c}",
                alt.dropped.join("; "),
                v.as_str().unwrap_or_default()
            );
        }
        s
    }
}

impl Render for VerdictReport {
    fn render(&self) -> String {
        format!("p = {}  n = {}  precision = {}  u_1 = {}\nverdict: {}\n", self.p, self.n, self.cfrak, self.u1, self.verdict)
    }
}

impl Render for ConvertReport {
    fn render(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "p = {}  n = {}", self.sequence.p, self.sequence.n);
        let _ = writeln!(s, "lower  ({})", join(&self.sequence.lower));
        let _ = writeln!(s, "upper  ({})", join(&self.sequence.upper));
        let failed: Vec<&RamCheck> = self.checks.iter().filter(|c| !c.holds).collect();
        let _ = writeln!(s, "inequalities: {} checked, {} failed", self.checks.len(), failed.len());
        for c in failed {
            let _ = writeln!(s, "  [FAIL] {}  (slack {})", c.id, c.slack);
        }
        s
    }
}

impl Render for ShiftTables {
    fn render(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "p = {}  n = {}  b = ({})", self.p, self.n, join(&self.b));
        let _ = writeln!(s, "{:>6} {:>10} {:>6}", "s", "b(s)", "a(s)");
        for (i, (bf, af)) in self.bfrak.iter().zip(&self.afrak).enumerate() {
            let _ = writeln!(s, "{i:>6} {bf:>10} {af:>6}");
        }
        s
    }
}

impl Render for OracleReport {
    fn render(&self) -> String {
        let mut s = String::new();
        let pr = &self.params;
        let _ = writeln!(s, "tower {}({})  p = {}  q = {}^{}  prec = {}", pr.variant, pr.n, pr.p, pr.p, pr.d, self.prec);
        let g = &self.group;
        let _ = writeln!(s, "group order {}  digest {}", g.order, g.digest);
        let _ = writeln!(
            s,
            "  relations: commutators {}, heisenberg {}, metacyclic {}, order of s1 {}{}",
            mark(g.relations.commutators_ok).trim(),
            g.relations.heisenberg,
            g.relations.metacyclic,
            g.relations.order_of_s1,
            g.relations.w.map_or(String::new(), |w| format!(", s1^p = s_N^{w}"))
        );
        let _ = writeln!(s, "v(Y) = {} (predicted {})", self.y.v_y, self.y.predicted_v_y);
        let _ = writeln!(s, "lower numbers: predicted ({})  measured ({})", join(&self.predicted_b), join(&self.measured_b));
        let f = &self.filtration;
        let _ = writeln!(s, "different: {} (Hilbert sum {})", f.different_val, f.hilbert_sum);
        let sc = &self.scaffold;
        let _ = writeln!(s, "v(X) = {} (expected {})", sc.v_x, sc.expected_v_x);
        for row in &sc.rows {
            let _ = writeln!(
                s,
                "  [{}] s_{}: measured {}  bound {}  contribution {}",
                mark(row.holds),
                row.generator,
                row.measured,
                row.bound,
                row.contribution
            );
        }
        let _ = writeln!(s, "  min contribution {} vs precision {}", sc.min_contribution, sc.cfrak);
        for l in &self.layers {
            let _ = writeln!(s, "  [{}] {}: lower ({})  upper ({})", mark(l.holds), l.layer, join(&l.lower), join(&l.upper));
        }
        let _ = writeln!(s, "{}", if self.pass { "PASS" } else { "FAIL" });
        s
    }
}
