pub mod f2linalg;
pub mod intlinalg;
pub mod seqdecomp;
pub mod group;
pub mod zeta;
pub mod oracles;
pub mod cli;
