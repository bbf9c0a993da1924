# Sparse VCH Control Tests
