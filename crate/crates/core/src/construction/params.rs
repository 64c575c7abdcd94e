use serde::{Deserialize, Serialize};

/// Prime sequences and block counts for the construction.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CbParams {
    /// `p_1, p_2, ...`
    pub p: Vec<u64>,
    /// `q_0, q_1, ...`
    pub q: Vec<u64>,
    /// `t_1, t_2, ...`
    pub t: Vec<u64>,
    /// Also require `p_n | q_{n-1} - 1` and compute the `(r_i, m_i)`
    /// decomposition. The TOML key is fixed by the parameter file format.
    #[serde(default, rename = "theorem612_mode")]
    pub scalar_mode: bool,
}

/// `q_i - 1 = r_i p_i^{m_i}` with `p_i` not dividing `r_i`; `r_0 = q_0 - 1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Decomposition {
    pub r: Vec<u64>,
    pub m: Vec<u32>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Validation {
    pub violations: Vec<String>,
    pub decomposition: Option<Decomposition>,
}

impl Validation {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }
}

pub fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
}

pub fn validate_params(params: &CbParams) -> Validation {
    let mut v = Vec::new();
    let CbParams { p, q, t, scalar_mode } = params;
    if q.len() != p.len() + 1 {
        v.push(format!(
            "expected {} values of q for {} values of p",
            p.len() + 1,
            p.len()
        ));
    }
    if t.len() != p.len() {
        v.push(format!("expected {} values of t", p.len()));
    }
    for (i, &x) in q.iter().enumerate() {
        if !is_prime(x) {
            v.push(format!("q_{i} = {x} is not prime"));
        }
    }
    for (i, &k) in t.iter().enumerate() {
        if k == 0 {
            v.push(format!("t_{} must be positive", i + 1));
        }
    }
    for (i, &pn) in p.iter().enumerate() {
        let n = i + 1;
        if !is_prime(pn) {
            v.push(format!("p_{n} = {pn} is not prime"));
        }
        if pn == 2 {
            v.push(format!("p_{n} != 2"));
        }
        if let Some(&qn) = q.get(n) {
            if (qn - 1) % pn != 0 {
                v.push(format!("p_{n} | q_{n}-1"));
            }
        }
        if let Some(&qp) = q.get(n - 1) {
            if qp == pn {
                v.push(format!("q_{} != p_{n}", n - 1));
            }
            if *scalar_mode && (qp - 1) % pn != 0 {
                v.push(format!("p_{n} | q_{}-1", n - 1));
            }
        }
    }
    let decomposition = (*scalar_mode && v.is_empty()).then(|| {
        let mut r = vec![q[0] - 1];
        let mut m = vec![0];
        for (i, &pn) in p.iter().enumerate() {
            let (mut ri, mut mi) = (q[i + 1] - 1, 0);
            while ri % pn == 0 {
                ri /= pn;
                mi += 1;
            }
            r.push(ri);
            m.push(mi);
        }
        Decomposition { r, m }
    });
    Validation {
        violations: v,
        decomposition,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(p: &[u64], q: &[u64], t: &[u64], mode: bool) -> CbParams {
        CbParams {
            p: p.to_vec(),
            q: q.to_vec(),
            t: t.to_vec(),
            scalar_mode: mode,
        }
    }

    #[test]
    fn standard_stage() {
        let v = validate_params(&params(&[3], &[7, 7], &[1], true));
        assert!(v.ok());
        assert_eq!(
            v.decomposition,
            Some(Decomposition {
                r: vec![6, 2],
                m: vec![0, 1]
            })
        );
    }

    #[test]
    fn violations() {
        let v = validate_params(&params(&[2], &[3, 5], &[1], false));
        assert!(v.violations.iter().any(|s| s == "p_1 != 2"));
        let v = validate_params(&params(&[3], &[5, 7], &[1], true));
        assert_eq!(v.violations, vec!["p_1 | q_0-1".to_string()]);
        assert!(validate_params(&params(&[3], &[5, 7], &[1], false)).ok());
        let v = validate_params(&params(&[3], &[3, 7], &[1], false));
        assert!(v.violations.iter().any(|s| s == "q_0 != p_1"));
    }
}
