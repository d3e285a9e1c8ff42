use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Rate and cost constants of the botnet defense model.
///
/// Contact-infection rates are indexed infector first, susceptible second:
/// `beta_ud` is the rate at which an unprotected infected computer infects a
/// defended susceptible one.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelParams {
    #[serde(rename = "q_rec_D")]
    pub q_rec_d: f64,
    #[serde(rename = "q_rec_U")]
    pub q_rec_u: f64,
    #[serde(rename = "q_inf_D")]
    pub q_inf_d: f64,
    #[serde(rename = "q_inf_U")]
    pub q_inf_u: f64,
    #[serde(rename = "beta_UU")]
    pub beta_uu: f64,
    #[serde(rename = "beta_UD")]
    pub beta_ud: f64,
    #[serde(rename = "beta_DU")]
    pub beta_du: f64,
    #[serde(rename = "beta_DD")]
    pub beta_dd: f64,
    pub lambda: f64,
    #[serde(rename = "v_H")]
    pub v_h: f64,
    #[serde(rename = "k_D")]
    pub k_d: f64,
    #[serde(rename = "k_I")]
    pub k_i: f64,
}

/// Config keys, in canonical order.
pub const PARAM_KEYS: [&str; 12] = [
    "q_rec_D", "q_rec_U", "q_inf_D", "q_inf_U", "beta_UU", "beta_UD", "beta_DU", "beta_DD", "lambda", "v_H", "k_D",
    "k_I",
];

impl ModelParams {
    /// Checks the structural invariants: finite, nonnegative, `lambda > 0`, `k_I > 0`.
    pub fn validate(&self) -> Result<()> {
        for (key, value) in PARAM_KEYS.iter().zip(self.values()) {
            if !value.is_finite() || value < 0.0 {
                return Err(Error::InvalidParams(format!("{key} = {value} must be finite and >= 0")));
            }
        }
        if self.lambda <= 0.0 {
            return Err(Error::InvalidParams("lambda must be > 0".into()));
        }
        if self.k_i <= 0.0 {
            return Err(Error::InvalidParams("k_I must be > 0".into()));
        }
        Ok(())
    }

    pub fn validated(self) -> Result<Self> {
        self.validate()?;
        Ok(self)
    }

    pub fn values(&self) -> [f64; 12] {
        [
            self.q_rec_d,
            self.q_rec_u,
            self.q_inf_d,
            self.q_inf_u,
            self.beta_uu,
            self.beta_ud,
            self.beta_du,
            self.beta_dd,
            self.lambda,
            self.v_h,
            self.k_d,
            self.k_i,
        ]
    }

    pub fn get(&self, key: &str) -> Option<f64> {
        PARAM_KEYS.iter().position(|k| *k == key).map(|i| self.values()[i])
    }

    /// Overwrites one parameter by its config key.
    pub fn set(&mut self, key: &str, value: f64) -> Result<()> {
        let slot = match key {
            "q_rec_D" => &mut self.q_rec_d,
            "q_rec_U" => &mut self.q_rec_u,
            "q_inf_D" => &mut self.q_inf_d,
            "q_inf_U" => &mut self.q_inf_u,
            "beta_UU" => &mut self.beta_uu,
            "beta_UD" => &mut self.beta_ud,
            "beta_DU" => &mut self.beta_du,
            "beta_DD" => &mut self.beta_dd,
            "lambda" => &mut self.lambda,
            "v_H" => &mut self.v_h,
            "k_D" => &mut self.k_d,
            "k_I" => &mut self.k_i,
            other => return Err(Error::Config(format!("unknown parameter key `{other}`"))),
        };
        *slot = value;
        Ok(())
    }

    /// Parses a flat `key = value` config (TOML). All twelve keys are required.
    pub fn from_toml_str(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.message().to_string()))
    }

    pub fn to_toml_string(&self) -> String {
        let mut out = String::new();
        for (key, value) in PARAM_KEYS.iter().zip(self.values()) {
            out.push_str(&format!("{key} = {value:?}\n"));
        }
        out
    }

    /// Price ratio `k_D / k_I`.
    pub fn kappa(&self) -> f64 {
        self.k_d / self.k_i
    }

    /// Copy with `k_D = kappa * k_I`, all else fixed.
    pub fn with_kappa(mut self, kappa: f64) -> Self {
        self.k_d = kappa * self.k_i;
        self
    }

    pub fn with_lambda(mut self, lambda: f64) -> Self {
        self.lambda = lambda;
        self
    }

    /// Direct-attack infection rate of a defended susceptible computer.
    pub fn direct_d(&self) -> f64 {
        self.q_inf_d * self.v_h
    }

    /// Direct-attack infection rate of an unprotected susceptible computer.
    pub fn direct_u(&self) -> f64 {
        self.q_inf_u * self.v_h
    }

    /// Recovery advantage of defended computers, `q_rec_D - q_rec_U`.
    pub fn delta(&self) -> f64 {
        self.q_rec_d - self.q_rec_u
    }

    pub fn satisfies_base_assumptions(&self) -> bool {
        self.q_rec_d >= self.q_rec_u
            && self.q_inf_d < self.q_inf_u
            && self.beta_ud <= self.beta_uu
            && self.beta_dd <= self.beta_du
            && self.k_d <= self.k_i
    }

    /// Contact infection depends only on the susceptible side:
    /// `beta_DU = beta_UU` and `beta_UD = beta_DD`.
    pub fn has_susceptible_only_contact(&self) -> bool {
        self.beta_du == self.beta_uu && self.beta_ud == self.beta_dd
    }

    pub fn has_equal_recovery(&self) -> bool {
        self.q_rec_d == self.q_rec_u
    }

    /// `q_rec_D - q_rec_U < (q_inf_U - q_inf_D) v_H`; implies every state lies in D1.
    pub fn has_bounded_recovery_gap(&self) -> bool {
        self.delta() < (self.q_inf_u - self.q_inf_d) * self.v_h
    }

    /// Largest rate constant, counting direct attacks at the current effort.
    pub fn max_rate(&self) -> f64 {
        [
            self.q_rec_d,
            self.q_rec_u,
            self.direct_d(),
            self.direct_u(),
            self.beta_uu,
            self.beta_ud,
            self.beta_du,
            self.beta_dd,
            self.lambda,
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }

    /// Relabels defended and unprotected: swaps every D-indexed constant with
    /// its U counterpart. Maps case (iii) dynamics onto case (iv).
    pub fn swap_protection(&self) -> Self {
        Self {
            q_rec_d: self.q_rec_u,
            q_rec_u: self.q_rec_d,
            q_inf_d: self.q_inf_u,
            q_inf_u: self.q_inf_d,
            beta_uu: self.beta_dd,
            beta_dd: self.beta_uu,
            beta_ud: self.beta_du,
            beta_du: self.beta_ud,
            ..*self
        }
    }
}

impl fmt::Display for ModelParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_toml_string())
    }
}
