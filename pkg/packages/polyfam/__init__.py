# TreeSpectra polynomial families
