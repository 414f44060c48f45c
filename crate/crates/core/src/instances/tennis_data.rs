//! The bundled ATP 2014 season corpus: 46 players, nine game-performance
//! percentages (integers as published by the tour statistics).

pub(super) const ATP_2014: [(&str, [f64; 9]); 46] = [
    ("Novak Djokovic", [67.0, 75.0, 56.0, 88.0, 63.0, 33.0, 58.0, 45.0, 33.0]),
    ("Roger Federer", [64.0, 79.0, 58.0, 91.0, 71.0, 32.0, 51.0, 39.0, 26.0]),
    ("Rafael Nadal", [70.0, 72.0, 55.0, 85.0, 66.0, 35.0, 56.0, 48.0, 35.0]),
    ("Stan Wawrinka", [55.0, 79.0, 54.0, 86.0, 61.0, 29.0, 50.0, 42.0, 22.0]),
    ("Kei Nishikori", [60.0, 73.0, 54.0, 84.0, 64.0, 30.0, 53.0, 42.0, 28.0]),
    ("Andy Murray", [60.0, 74.0, 51.0, 81.0, 61.0, 33.0, 55.0, 44.0, 32.0]),
    ("Tomas Berdych", [58.0, 78.0, 54.0, 86.0, 63.0, 30.0, 54.0, 39.0, 25.0]),
    ("Milos Raonic", [61.0, 83.0, 54.0, 90.0, 69.0, 27.0, 45.0, 39.0, 16.0]),
    ("Marin Cilic", [57.0, 79.0, 50.0, 85.0, 66.0, 30.0, 50.0, 37.0, 22.0]),
    ("David Ferrer", [63.0, 69.0, 52.0, 79.0, 62.0, 34.0, 56.0, 43.0, 33.0]),
    ("Grigor Dimitrov", [61.0, 77.0, 54.0, 86.0, 64.0, 29.0, 50.0, 42.0, 22.0]),
    ("Jo-Wilfried Tsonga", [62.0, 77.0, 54.0, 87.0, 70.0, 29.0, 45.0, 39.0, 18.0]),
    ("Ernests Gulbis", [60.0, 78.0, 51.0, 85.0, 64.0, 29.0, 50.0, 40.0, 21.0]),
    ("Feliciano Lopez", [60.0, 78.0, 53.0, 86.0, 69.0, 25.0, 45.0, 34.0, 15.0]),
    ("Roberto Bautista Agut", [69.0, 70.0, 53.0, 81.0, 65.0, 31.0, 53.0, 43.0, 26.0]),
    ("Kevin Anderson", [66.0, 75.0, 51.0, 86.0, 69.0, 26.0, 48.0, 35.0, 18.0]),
    ("Tommy Robredo", [64.0, 74.0, 54.0, 85.0, 64.0, 29.0, 49.0, 37.0, 21.0]),
    ("Gael Monfils", [65.0, 73.0, 50.0, 82.0, 62.0, 34.0, 50.0, 40.0, 27.0]),
    ("John Isner", [68.0, 79.0, 57.0, 93.0, 75.0, 24.0, 42.0, 24.0, 9.0]),
    ("Fabio Fognini", [59.0, 69.0, 48.0, 73.0, 56.0, 32.0, 51.0, 43.0, 27.0]),
    ("Gilles Simon", [56.0, 71.0, 51.0, 78.0, 63.0, 31.0, 53.0, 45.0, 26.0]),
    ("Alexandr Dolgopolov", [55.0, 75.0, 52.0, 82.0, 62.0, 30.0, 51.0, 38.0, 23.0]),
    ("Philipp Kohlschreiber", [59.0, 73.0, 56.0, 84.0, 62.0, 29.0, 50.0, 43.0, 23.0]),
    ("Julien Benneteau", [64.0, 72.0, 50.0, 82.0, 63.0, 28.0, 49.0, 37.0, 21.0]),
    ("Richard Gasquet", [65.0, 73.0, 56.0, 84.0, 59.0, 28.0, 50.0, 38.0, 21.0]),
    ("Leonardo Mayer", [60.0, 75.0, 54.0, 82.0, 61.0, 29.0, 49.0, 38.0, 19.0]),
    ("Jeremy Chardy", [59.0, 77.0, 50.0, 82.0, 63.0, 27.0, 50.0, 39.0, 19.0]),
    ("Lukas Rosol", [57.0, 72.0, 50.0, 78.0, 60.0, 27.0, 47.0, 41.0, 17.0]),
    ("Santiago Giraldo", [63.0, 70.0, 50.0, 78.0, 63.0, 30.0, 49.0, 42.0, 23.0]),
    ("Fernando Verdasco", [66.0, 72.0, 51.0, 82.0, 66.0, 30.0, 49.0, 39.0, 22.0]),
    ("Sam Querrey", [61.0, 79.0, 52.0, 87.0, 67.0, 26.0, 46.0, 37.0, 16.0]),
    ("Guillermo Garcia-Lopez", [57.0, 69.0, 48.0, 74.0, 58.0, 32.0, 50.0, 40.0, 26.0]),
    ("Yen-Hsun Lu", [64.0, 71.0, 52.0, 80.0, 66.0, 26.0, 51.0, 41.0, 21.0]),
    ("Dominic Thiem", [58.0, 71.0, 51.0, 77.0, 60.0, 29.0, 50.0, 37.0, 22.0]),
    ("Benjamin Becker", [59.0, 74.0, 49.0, 79.0, 60.0, 27.0, 49.0, 37.0, 20.0]),
    ("Pablo Andujar", [66.0, 64.0, 52.0, 73.0, 57.0, 32.0, 53.0, 42.0, 29.0]),
    ("Jack Sock", [59.0, 76.0, 54.0, 86.0, 69.0, 25.0, 47.0, 42.0, 19.0]),
    ("Jerzy Janowicz", [60.0, 74.0, 47.0, 79.0, 60.0, 27.0, 48.0, 39.0, 18.0]),
    ("Andreas Seppi", [57.0, 70.0, 52.0, 77.0, 64.0, 31.0, 49.0, 37.0, 22.0]),
    ("Marcel Granollers", [61.0, 69.0, 48.0, 73.0, 54.0, 29.0, 49.0, 40.0, 23.0]),
    ("Denis Istomin", [68.0, 72.0, 51.0, 81.0, 63.0, 27.0, 48.0, 40.0, 19.0]),
    ("Joao Sousa", [60.0, 67.0, 48.0, 72.0, 61.0, 29.0, 46.0, 38.0, 19.0]),
    ("Federico Delbonis", [62.0, 71.0, 53.0, 81.0, 63.0, 27.0, 49.0, 36.0, 18.0]),
    ("Jarkko Nieminen", [65.0, 70.0, 49.0, 77.0, 58.0, 26.0, 52.0, 38.0, 20.0]),
    ("Marinko Matosevic", [59.0, 71.0, 49.0, 76.0, 63.0, 28.0, 50.0, 38.0, 20.0]),
    ("Edouard Roger-Vasselin", [67.0, 70.0, 51.0, 82.0, 68.0, 26.0, 48.0, 37.0, 18.0]),
];
