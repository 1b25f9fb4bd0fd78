//! Experiment drivers, statistics, and structured report emission.

pub mod experiments;
pub mod report;

pub use experiments::{
    d4_ball_experiment, random_body_trends, scaling_fit, stress_crosscheck, verify_qlbt,
    witness_strips, D4BallConfig, QlbtConfig, RandomTrendsConfig, ScalingConfig,
    StressCrosscheckConfig, WitnessStripConfig,
};
pub use report::{ExperimentReport, ScalingPoint, ScalingSeries, TrialRecord, Verdict, THETA_2};
