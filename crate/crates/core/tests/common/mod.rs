#![allow(dead_code)]
pub mod truth;
