# TreeSpectra spectral measures
