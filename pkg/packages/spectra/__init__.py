# TreeSpectra spectra assembly and certificates
