"""Principal square response forward regression and SDR benchmarks."""
