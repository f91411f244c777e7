# TreeSpectra dense oracle
