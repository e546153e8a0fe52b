#![allow(dead_code)]

pub mod corpora;
pub mod oracle;
