pub mod horizon;
pub mod patterns;
pub mod instance;
pub mod ipcore;
pub mod stage1;
pub mod stage2;
pub mod split;
pub mod pipeline;
pub mod simgen;
