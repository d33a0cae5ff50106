// Reference values from an independent Royston implementation.
pub const CASES: &[(&[f64], f64, f64)] = &[
    (
        &[0.468178, -1.152208, -1.705864],
        0.925710554148632,
        0.4727762500554836,
    ),
    (
        &[2.138812, 0.010138, 0.907338],
        0.9918471327167251,
        0.8273174471839027,
    ),
    (
        &[0.173635, 0.18794, 0.53719, 1.089597],
        0.8551659204482285,
        0.24333339595631986,
    ),
    (
        &[0.905291, 0.450908, 0.663214, 0.234895, 0.355369],
        0.9580482469503362,
        0.7943310314449235,
    ),
    (
        &[0.582215, 0.664532, 0.026809, 1.724071, 0.063993, 0.663016],
        0.8514998260596186,
        0.16185472314949095,
    ),
    (
        &[
            0.787424, 0.557808, -0.413273, -0.556077, -0.181491, -0.492391, -0.03262,
        ],
        0.874331261153371,
        0.20245118488625247,
    ),
    (
        &[
            -3.857473, 0.719293, -0.097698, 1.208286, 4.981708, -0.983688, 0.850831, -10.878613,
        ],
        0.8709096101216768,
        0.15384547333859067,
    ),
    (
        &[
            0.50455, 0.189418, 0.047716, 0.935731, 0.560778, 0.571147, 0.764712, 0.358366, 0.018987,
        ],
        0.954385445249202,
        0.7381291434362982,
    ),
    (
        &[
            -0.770396, -1.276265, 0.916019, -0.422772, -1.093314, -0.516581, 0.518111, -0.76254,
            -0.931199, 0.692083,
        ],
        0.875747352652078,
        0.11656886497124763,
    ),
    (
        &[
            0.668901, 0.659335, 3.39747, 1.133174, 1.430206, 0.36448, 0.08663, 1.559364, 0.742312,
            0.640727, 0.246767,
        ],
        0.8002374473970791,
        0.009475126088015115,
    ),
    (
        &[
            -0.260291, -0.450035, -0.385667, 0.48768, 0.439812, -0.787575, 0.253867, 0.319253,
            -0.155389, 0.485218, 1.045706, -0.644286,
        ],
        0.950677610212306,
        0.6469120412511024,
    ),
    (
        &[
            -0.142311, 0.098668, -0.566975, -0.574793, -1.161396, 0.368019, 5.695895, -0.213648,
            0.10757, -0.186401, 0.556811, -4.926532, 1.138749, 1.661238, -1.311551,
        ],
        0.8434601435521916,
        0.01405049678713206,
    ),
    (
        &[
            0.587787, 0.403576, 0.717723, 0.153614, 0.245432, 0.901648, 0.133115, 0.302103,
            0.018208, 0.881801, 0.869091, 0.124248, 0.019658, 0.78374, 0.078468, 0.964908,
            0.606462, 0.417035, 0.349383, 0.3039,
        ],
        0.9165669617624007,
        0.08511561984584866,
    ),
    (
        &[
            0.066124, 2.717524, 0.493019, 0.027049, 0.038105, 2.58705, 0.559655, 0.195542,
            0.656848, 0.039369, 0.739264, 1.683934, 0.135607, 0.396698, 1.96762, 0.249546,
            0.051733, 0.887673, 0.127819, 0.382702, 0.115628, 0.336102, 0.06869, 1.450926,
            0.584665,
        ],
        0.7656430692728311,
        6.40196929999565e-05,
    ),
    (
        &[
            -0.62136, 1.026642, 0.416936, -2.470046, 1.318748, 0.187308, -0.134155, -0.261737,
            0.94121, -1.104899, -0.124516, 1.537466, -0.754654, -0.138154, 0.557402, 0.21867,
            0.349179, 0.051035, 0.231189, -0.585627, -0.429995, -0.741777, -0.034453, -1.555987,
            -1.030953, 0.803365, -0.396973, -0.491379, -0.006505, 2.485902,
        ],
        0.9786462994774545,
        0.788527105193209,
    ),
    (
        &[
            0.490164, 1.759431, 0.648613, 0.549036, 0.993573, 0.593532, 1.938972, 1.666983,
            0.795888, 4.201685, 1.989968, 1.255371, 1.29245, 1.353259, 0.930633, 0.589378,
            3.377614, 3.427315, 0.521527, 0.935646, 0.53785, 3.507368, 0.967391, 1.825449,
            1.846769, 0.535989, 1.062314, 0.419985, 1.565193, 0.396739, 0.974434, 0.223749,
            1.024652, 1.761506, 1.159401, 1.438362, 1.384139, 0.741408, 1.799435, 0.4081, 5.57873,
            0.229048, 0.519182, 2.513102, 0.528888, 0.078547, 1.829483, 1.574713, 1.173635,
            0.613943,
        ],
        0.8173737791810349,
        2.2576303865622695e-06,
    ),
    (
        &[
            -0.290312, 0.980147, 0.782579, -0.831364, -0.309299, -0.790569, 1.656813, 0.180209,
            0.670458, 0.729118, -1.338938, 0.739169, -1.431732, 0.749961, -0.60365, 0.283098,
            -0.017511, -0.216976, 0.457874, -0.769455, -1.606488, 2.25574, 1.18111, 1.237172,
            0.305226, -1.142742, 0.176349, -1.210425, 0.100456, -0.246993, 1.11527, -0.73823,
            0.176957, -0.773491, 0.876674, -0.080248, -0.301615, 0.093677, 0.373457, 0.512155,
            -0.926571, -0.646423, 0.646924, -1.834757, 1.563562, -1.261096, 0.018259, -0.238015,
            0.507013, 0.431927, 1.727132, 1.421886, -0.632659, 0.821604, 0.727532, -0.178273,
            -0.24385, -1.437434, 1.805704, 1.006151, 0.553058, -0.204328, -0.056865, 0.392678,
            -0.510828, 1.862998, 2.024483, 0.091786, -0.856546, -1.08757, 0.452805, 0.918226,
            -2.05982, -0.273927, -0.486158,
        ],
        0.9926036355839343,
        0.9446738436087232,
    ),
    (
        &[
            1.395859, -0.677635, -0.880589, -0.449368, -2.129444, 0.881632, 2.664171, 0.470163,
            0.599572, -0.540903, -0.537624, 0.831774, 0.051226, 1.930935, -1.818969, -0.932638,
            0.552664, 0.911574, -2.279754, 0.342096, -0.126228, 1.013612, -0.712411, -1.063415,
            2.743315, -1.434448, -1.302098, -0.070451, 1.250893, -1.341219, 0.889218, -0.578765,
            0.476137, 1.224315, 0.02133, -1.7275, 0.312366, 1.134624, -4.495405, 0.837921,
            0.208108, -2.657652, 0.79336, 0.704059, 0.436996, 0.030986, 1.582542, 1.000511,
            -0.880048, -1.343937, -1.173323, 0.796451, -1.060591, -1.105546, 1.338587, -0.040372,
            -1.264337, 0.25895, 0.139609, 0.720283, 0.606277, 0.286793, -0.874411, -0.3402,
            -1.34066, 0.615734, 1.70119, 0.479241, 2.020747, 1.807774, -0.037752, 0.700691,
            -0.280801, -0.169107, -2.031336, 0.265425, -0.41475, 0.15457, 0.714304, -0.390393,
            -0.039034, 0.082167, 0.227818, 1.141259, -0.199324, -0.867849, 0.59945, -0.894419,
            -1.125225, -0.480729, -0.180095, -0.929438, 0.1057, -17.748954, -0.007562, -1.123015,
            2.795899, -0.665753, -1.19392, -0.678899,
        ],
        0.5646588821347749,
        9.62398145092858e-16,
    ),
    (
        &[
            0.480448, 0.363652, 0.60479, 0.10061, 0.770517, 0.9416, 0.662009, 0.514981, 0.341679,
            0.894633, 0.037282, 0.773498, 0.575552, 0.727442, 0.434846, 0.499895, 0.094358,
            0.013784, 0.391709, 0.774794, 0.584771, 0.257736, 0.099676, 0.407152, 0.720321,
            0.416998, 0.704522, 0.506147, 0.606193, 0.466834, 0.03038, 0.634923, 0.157413,
            0.730121, 0.474978, 0.92239, 0.252094, 0.468665, 0.308325, 0.294857, 0.885758,
            0.272555, 0.55427, 0.199215, 0.938633, 0.929575, 0.432973, 0.515302, 0.514563,
            0.472341, 0.570297, 0.198111, 0.496987, 0.979142, 0.705102, 0.010725, 0.745393,
            0.723542, 0.157541, 0.414662, 0.666701, 0.317686, 0.847583, 0.925078, 0.216354,
            0.279113, 0.63601, 0.776705, 0.565761, 0.56298, 0.491851, 0.032307, 0.090645, 0.450521,
            0.158564, 0.460891, 0.934063, 0.646232, 0.7443, 0.130262, 0.718074, 0.347526, 0.861551,
            0.247016, 0.108119, 0.313409, 0.742682, 0.943928, 0.586132, 0.816687, 0.192808,
            0.852075, 0.820526, 0.043744, 0.479202, 0.627072, 0.943555, 0.075161, 0.991814,
            0.268949, 0.518194, 0.972529, 0.295437, 0.415587, 0.109177, 0.614721, 0.32961,
            0.955054, 0.695667, 0.362263, 0.583734, 0.263573, 0.35234, 0.564346, 0.526194,
            0.757072, 0.383477, 0.907785, 0.156014, 0.828559, 0.468579, 0.674784, 0.907282,
            0.006451, 0.378831, 0.204266, 0.045393, 0.017691, 0.556159, 0.149108, 0.762558,
            0.022092, 0.584424, 0.54947, 0.576574, 0.187213, 0.620885, 0.539291, 0.20153, 0.161833,
            0.704147, 0.459411, 0.372905, 0.000928, 0.788916, 0.845989, 0.386687, 0.393454,
            0.983812, 0.90419,
        ],
        0.9656987648350814,
        0.0008511780774379891,
    ),
    (
        &[
            1.157708, 0.4256, -0.879498, 1.945518, -1.398533, -1.17646, -0.287046, -1.643793,
            1.001574, -0.728574, 0.177681, -1.875826, -0.004208, -2.205261, 1.455612, 0.389099,
            1.936655, -0.34314, 1.521175, 0.932659, 0.717178, -0.641144, -0.242358, 0.282242,
            -0.270881, 1.575283, 0.266747, 0.338207, -0.66288, -0.423446, 1.274341, -0.11625,
            -0.862839, 0.316171, 0.57602, 0.136897, -1.690128, -0.17579, -0.587785, -2.581298,
            0.915831, 0.728155, -0.936816, -0.457876, 0.936637, -0.14372, -1.036017, -0.50328,
            -0.831734, -1.091977, 0.496105, -1.792174, -0.852273, -0.394214, 0.519427, -0.202661,
            -0.824304, 1.210037, -0.136809, 0.96598, -0.784718, -0.544441, -0.721165, -0.719571,
            -0.143354, 0.85437, 0.195004, -1.715106, -0.528785, -1.137539, -1.417524, -0.413171,
            -1.303089, -0.790509, 2.318764, 1.931049, -1.295476, 0.861784, 1.305423, 1.34931,
            0.155534, 0.330783, -1.755202, 0.553344, 0.661882, -0.595493, 0.139271, -1.258887,
            -2.305818, 1.008363, 1.807704, 0.006358, -1.442462, -0.124119, -0.482641, 1.151874,
            2.399135, -0.343731, 1.746815, -0.76207, 0.952026, -0.943753, -0.604583, 1.11997,
            -1.035587, 0.842434, 0.305424, -0.037565, 0.88925, 0.415779, 0.862991, 0.294255,
            0.907977, 0.606969, 2.05818, -0.038632, 0.629769, 1.063895, 1.053684, 0.028542,
            0.616768, -0.942994, 0.248309, -0.645021, 0.967773, 2.016106, 0.006706, 0.235195,
            -0.128732, -1.285437, 0.948127, -0.795875, 0.326503, -0.710987, -0.347623, 0.635,
            -0.78185, -0.435107, 0.520641, -0.351297, -0.254947, -1.099978, -0.879253, -0.079849,
            -0.276884, 0.068715, 0.067899, -0.087622, -0.71957, 0.20641, -0.463505, -0.720162,
            -1.019978, -0.860977, 0.558773, -0.264991, -0.628811, 1.024944, -0.225756, -1.595236,
            0.751558, 0.082992, -0.92548, 1.166056, -1.078938, 1.868276, -1.863423, -0.212154,
            -0.673124, -0.043885, -1.864126, -0.754497, 0.040264, 0.064551, 0.039546, -0.316396,
            -1.070842, 0.779626, 0.366614, 0.615704, 0.776417, 0.250347, -0.024419, 0.209847,
            0.388856, -0.731399, 1.859712, 0.48898, -0.684224, 1.208404, -1.993996, -1.824719,
            0.21407, 1.052891, -0.193071, -0.158001, -0.881519, -0.061789, -0.80878, -0.212909,
            -0.841468, 1.0569, 0.946632, 0.306228, 0.661502, -1.067722, 0.32027, 0.903422,
            -0.516929, 1.329474, 0.360526, 1.990872, -1.018074, -0.186439, -0.923162, -0.373814,
            -0.335345, 1.261797, 1.09623, 0.285744, 1.134866, 2.362683, 1.803817, -0.018799,
            -1.567287, 0.154932, 0.326444, -0.909732, -1.903403, -0.473365, -0.075588, 0.362673,
            0.7446, 0.829834, 0.498199, 1.766492, -0.298299, 0.612592, -0.060433, -1.83989,
            0.469064, -0.521352, -0.399883, -0.11523, 2.062876, -0.294214, -0.176516, -0.210445,
            -0.04311, 0.667428,
        ],
        0.994204811387989,
        0.4539039270172205,
    ),
];
