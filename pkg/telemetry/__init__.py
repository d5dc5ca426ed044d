# Run ledger for certification sweeps
