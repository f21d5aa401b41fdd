"""Time-optimal robust MPC for linear systems with interval-matrix uncertainty."""
