"""Generated by tools/gen_filters.py. Do not edit by hand."""

DAUBECHIES = {
    2: (
        0.48296291314453414,
        0.83651630373780791,
        0.22414386804201338,
        -0.12940952255126038,
    ),
    3: (
        0.33267055295008262,
        0.80689150931109258,
        0.45987750211849157,
        -0.13501102001025459,
        -0.085441273882026662,
        0.035226291885709537,
    ),
    4: (
        0.2303778133088965,
        0.71484657055291565,
        0.63088076792985891,
        -0.027983769416859854,
        -0.18703481171909308,
        0.030841381835560764,
        0.0328830116668852,
        -0.010597401785069032,
    ),
    5: (
        0.16010239797419291,
        0.60382926979718967,
        0.72430852843777293,
        0.13842814590132073,
        -0.24229488706638203,
        -0.032244869584638375,
        0.077571493840045714,
        -0.0062414902127982743,
        -0.012580751999081999,
        0.0033357252854737713,
    ),
    6: (
        0.11154074335010946,
        0.49462389039845309,
        0.75113390802109535,
        0.31525035170919763,
        -0.22626469396543982,
        -0.12976686756726194,
        0.097501605587323049,
        0.027522865530305729,
        -0.03158203931748603,
        0.00055384220116149614,
        0.0047772575109455106,
        -0.0010773010853084796,
    ),
    7: (
        0.077852054085009179,
        0.39653931948191731,
        0.72913209084623512,
        0.46978228740519312,
        -0.14390600392856498,
        -0.22403618499387498,
        0.071309219266830265,
        0.080612609151083072,
        -0.038029936935014414,
        -0.016574541630666881,
        0.012550998556099841,
        0.00042957797292136652,
        -0.0018016407040474909,
        0.00035371379997452025,
    ),
    8: (
        0.05441584224310401,
        0.31287159091429997,
        0.67563073629728981,
        0.58535468365420671,
        -0.015829105256349306,
        -0.28401554296154693,
        0.00047248457391328277,
        0.12874742662047846,
        -0.017369301001807546,
        -0.044088253930794752,
        0.013981027917398282,
        0.0087460940474057767,
        -0.0048703529934515743,
        -0.00039174037337694705,
        0.00067544940645056937,
        -0.00011747678412476953,
    ),
    9: (
        0.038077947363878347,
        0.24383467461259035,
        0.60482312369011111,
        0.65728807805130054,
        0.13319738582500758,
        -0.29327378327917491,
        -0.096840783222976461,
        0.14854074933810638,
        0.030725681479333379,
        -0.067632829061329974,
        0.00025094711483145196,
        0.022361662123679097,
        -0.0047232047577513973,
        -0.0042815036824634298,
        0.0018476468830562265,
        0.00023038576352319597,
        -0.00025196318894271014,
        3.9347320316271599e-5,
    ),
    10: (
        0.026670057900555554,
        0.18817680007769149,
        0.52720118893172559,
        0.68845903945360357,
        0.28117234366057746,
        -0.24984642432731538,
        -0.19594627437737704,
        0.12736934033579326,
        0.093057364603572351,
        -0.071394147166397087,
        -0.029457536821875813,
        0.033212674059341002,
        0.0036065535669561697,
        -0.010733175483330575,
        0.0013953517470529012,
        0.0019924052951850561,
        -0.00068585669495971163,
        -0.00011646685512928545,
        9.3588670320069591e-5,
        -1.3264202894521245e-5,
    ),
}

COIFLETS = {
    # seed-to-solution drift 4.8e-17
    1: (
        -0.072732619512526448,
        0.33789766245748177,
        0.85257202021160042,
        0.38486484686485775,
        -0.072732619512526448,
        -0.015655728135791993,
    ),
    # seed-to-solution drift 5.11e-12
    2: (
        0.01638733646320364,
        -0.041464936786871774,
        -0.067372554723725594,
        0.38611006682276285,
        0.8127236354494135,
        0.41700518442323905,
        -0.076488599078280754,
        -0.059434418646431087,
        0.023680171946847769,
        0.0056114348193688342,
        -0.0018232088709110321,
        -0.000720549445520347,
    ),
    # seed-to-solution drift 1.65e-12
    3: (
        -0.0037935128643808017,
        0.0077825964256727458,
        0.023452696142077166,
        -0.065771911281469367,
        -0.061123390002972541,
        0.4051769024091182,
        0.79377722262608717,
        0.42848347637736998,
        -0.071799821619154834,
        -0.082301927106299818,
        0.034555027573297733,
        0.015880544863669451,
        -0.0090079761367306239,
        -0.002574517688136797,
        0.0011175187708306302,
        0.00046621695982040287,
        -7.0983302506379006e-5,
        -3.4599773197272774e-5,
    ),
    # seed-to-solution drift 5.65e-5
    4: (
        0.00089231390253700296,
        -0.0016294924252267858,
        -0.0073461679362680498,
        0.016068947131575027,
        0.026682304669604833,
        -0.081266710249193723,
        -0.056077319603569256,
        0.41530842700068227,
        0.78223893442428259,
        0.43438603311435654,
        -0.066627472366817157,
        -0.096220424535952637,
        0.039334422605589146,
        0.025082253337949607,
        -0.015211728187697212,
        -0.0056582838001308837,
        0.0037514346971460863,
        0.0012665610789256602,
        -0.00058902022463321648,
        -0.0002599743371222568,
        6.2338854312787181e-5,
        3.1229861599195265e-5,
        -3.2596479400307507e-6,
        -1.7849909144933467e-6,
    ),
    # seed-to-solution drift 1.11e-5
    5: (
        -0.000212081862067494,
        0.00035857774116175769,
        0.0021782943778456948,
        -0.0041593126275786397,
        -0.010131584846900275,
        0.023408322118927783,
        0.028169744270532352,
        -0.091921588060086083,
        -0.052046670253554757,
        0.42157126673075435,
        0.77429362286032745,
        0.43798230665916332,
        -0.062037751574981951,
        -0.10556315130733723,
        0.041287530472117831,
        0.032674799467057351,
        -0.019758391600965465,
        -0.009159507338676163,
        0.0067615202206204168,
        0.0024315754425382885,
        -0.0016616273039298788,
        -0.00063755892612588111,
        0.00030185794166824475,
        0.00014035632812373243,
        -4.1219861924265502e-5,
        -2.1270221672515614e-5,
        3.7007277113394795e-6,
        2.0612203985788782e-6,
        -1.6237995172048335e-7,
        -9.6040101127678921e-8,
    ),
}
