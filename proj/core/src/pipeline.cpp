namespace starksic {}
